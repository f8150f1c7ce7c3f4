#pragma once

#include <map>
#include <vector>

#include "qroots/linalg.hpp"
#include "qroots/uq.hpp"

namespace qroots {

/// The Drinfeld pairing tau : U^{>=0} x U^{<=0} -> F, computed recursively
/// from its defining identities, with per-weight Gram tables and dual bases.
class DrinfeldPairing {
public:
    explicit DrinfeldPairing(const UAlgebra& alg) : alg_(alg) {}

    const UAlgebra& algebra() const { return alg_; }

    /// tau on x in U^{>=0}, y in U^{<=0}; throws if an argument strays outside.
    QScalar tau(const UElem& x, const UElem& y) const;

    /// Gram matrix of tau on the plain PBW bases of U^+_gamma x U^-_{-gamma}.
    const Mat<QScalar>& gram(const Weight& gamma) const;

    enum class Normalization { FSidePlain, VariantA, VariantB };

    struct DualBases {
        std::vector<UElem> x;      // basis of U^+_gamma (or U^{L,+} for VariantA)
        std::vector<UElem> y;      // basis of U^-_{-gamma} (or U^{L,-} for VariantB)
        std::vector<Weight> beta;  // the common weight, repeated per pair
    };

    /// Dual bases with tau(x_p, y_q) = delta_{pq}.
    /// FSidePlain: y = plain f-PBW basis, x solves the Gram system.
    /// VariantA:   x = divided e-PBW basis (U_A^{L,+}), y dual in U_A^-.
    /// VariantB:   y = divided f-PBW basis (U_A^{L,-}), x dual in U_A^+.
    DualBases dual_bases(const Weight& gamma, Normalization norm) const;

private:
    const UAlgebra& alg_;
    mutable std::map<std::pair<HalfWord, std::vector<int>>, QScalar> tau_words_;
    mutable std::map<Weight, Mat<QScalar>> grams_;

    QScalar tau_word(const HalfWord& eword, const std::vector<int>& fmono) const;
    QScalar tau_monos(const std::vector<int>& emono, const std::vector<int>& fmono) const;
};

}  // namespace qroots
