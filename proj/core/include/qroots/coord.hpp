#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qroots/reps.hpp"

namespace qroots {

/// The graded coordinate rings A_F / A_A / A_zeta of the quantized flag
/// manifold, with A(lambda) realized as the graded dual of the lattice in the
/// lowest-weight simple of weight -lambda. Component vectors are indexed by
/// the flat basis (weight blocks in module order).
class CoordRing {
public:
    CoordRing(const UAlgebra& alg, const RootOfUnityConfig& cfg);

    const UAlgebra& algebra() const { return alg_; }
    const RootOfUnityConfig& config() const { return cfg_; }

    struct Component {
        Weight lambda;
        FModule simple;        // L_+(-lambda) in monomial-class coordinates
        LatticeBasis lattice;  // A-lattice columns
        std::vector<Mat<QScalar>> exprs;  // lattice basis over divided monomials
        std::vector<std::vector<std::vector<int>>> lattice_monos;  // per weight
        FModule lat_mod;       // simple in lattice coordinates (A-integral blocks)
        FModule dual;          // A(lambda) over F: star dual of lat_mod
        ZModule dual_z;        // A_zeta(lambda)
        std::vector<int> offset;  // flat offsets per dual weight index
        int total = 0;

        int index_of(int dual_wi, int pos) const { return offset[dual_wi] + pos; }
        /// index of the dual weight of a flat position
        int weight_of(int flat) const;
    };

    const Component& component(const Weight& lambda) const;

    /// Structure constants of A(lambda) x A(mu) -> A(lambda+mu) over the flat
    /// dual bases; entries are A-integral. tensor[B][c][d].
    struct ProductTable {
        Weight lambda, mu;
        // For each product-basis flat index B: list of (c, d, coeff) with
        // c in A(mu)'s primal lattice basis... stored contracted:
        // coeff of (phi psi)_B = sum entries T[B][(cmu, clam)] psi_cmu phi_clam.
        std::vector<std::map<std::pair<int, int>, QScalar>> t;
    };
    const ProductTable& product_table(const Weight& lambda, const Weight& mu) const;

    // --- generic (F) level -------------------------------------------------
    Vec<QScalar> multiply(const Weight& lambda, const Vec<QScalar>& phi, const Weight& mu,
                          const Vec<QScalar>& psi) const;
    /// u . phi for phi in A(lambda); u a normal-form element.
    Vec<QScalar> act(const Weight& lambda, const UElem& u, const Vec<QScalar>& phi) const;
    /// Hopf pairing <phi, u> = phi(S(u) v).
    QScalar hopf_pair(const Weight& lambda, const Vec<QScalar>& phi, const UElem& u) const;
    /// Weight of a flat basis index; phi is homogeneous iff supported on one.
    Weight coord_weight(const Weight& lambda, int flat) const;
    /// Extremal vector of A(lambda)_{w^{-1} lambda} (the space is 1-dim).
    Vec<QScalar> theta_vector(const std::vector<int>& w_word, const Weight& lambda) const;

    // --- zeta level ---------------------------------------------------------
    Vec<CycScalar> multiply_z(const Weight& lambda, const Vec<CycScalar>& phi, const Weight& mu,
                              const Vec<CycScalar>& psi) const;
    Vec<CycScalar> specialize_vec(const Weight& lambda, const Vec<QScalar>& phi) const;
    /// Action of a specialized element on A_zeta(lambda) (DK or L basis keys;
    /// monomials may involve non-simple roots only when their divided blocks
    /// exist, which covers rank-one data and A-integral inputs).
    Vec<CycScalar> act_z(const Weight& lambda, const ZUElem& u, const Vec<CycScalar>& phi) const;

    // --- classical level ----------------------------------------------------
    struct ClassicalComponent {
        Weight lambda;
        WModule<mpq_class> module;   // classical L_+(-lambda) in lattice coords
        WModule<mpq_class> dual;     // A_1(lambda)
        std::vector<int> offset;
        int total = 0;
    };
    const ClassicalComponent& classical_component(const Weight& lambda) const;

    /// Embedding A_1(lambda) -> A_zeta(ell lambda): flat matrix over the dual
    /// bases (columns = classical functionals).
    const Mat<CycScalar>& a1_embed(const Weight& lambda) const;

    /// The quotient data behind a1_embed: radical of the specialized
    /// contravariant form on the Weyl module at ell*lambda.
    struct FrobeniusQuotient {
        std::vector<RowSpan<CycScalar>> radical;  // per weight of the Weyl module
        std::vector<std::vector<int>> keep;       // complement coordinate choice
        Mat<CycScalar> iso;                       // classical basis -> quotient coords (flat)
    };
    const FrobeniusQuotient& frobenius_quotient(const Weight& lambda) const;

    // --- chart (level zeta, w = e, type-level support for rank 1) -----------
    struct Chart {
        int level = 0;                      // k: denominators s^{ell k}
        Weight unit;                        // the fundamental weight w1
        std::vector<Weight> grades;         // grade of V_j, j = 0..k: j*ell*w1
        // freeness witness: per level j, the span decomposition dimensions
        std::vector<int> dims;
    };
    Chart chart(int filtration_level) const;
    /// dim A_zeta(j ell w1) (chart numerator dimensions).
    int chart_dim(int j) const;

private:
    const UAlgebra& alg_;
    RootOfUnityConfig cfg_;
    mutable std::map<Weight, Component> comps_;
    mutable std::map<std::pair<Weight, Weight>, ProductTable> products_;
    mutable std::map<Weight, ClassicalComponent> classical_;
    mutable std::map<Weight, Mat<CycScalar>> a1_;
    mutable std::map<Weight, FrobeniusQuotient> frq_;
};

}  // namespace qroots
