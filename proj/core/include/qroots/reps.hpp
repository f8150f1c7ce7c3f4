#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "qroots/linalg.hpp"
#include "qroots/pairing.hpp"
#include "qroots/uq.hpp"

namespace qroots {

/// Weight module over a coefficient field K with divided-power action blocks.
/// Blocks are stored per (side, simple index i, power n, source weight); a
/// missing block means the divided power acts as zero (or leaves the window).
template <class K>
struct WModule {
    std::vector<Weight> weights;
    std::map<Weight, int> windex;
    std::vector<int> dim;
    /// act[(is_e, i, n, source weight index)] -> matrix into the target space.
    std::map<std::tuple<int, int, int, int>, Mat<K>> act;
    /// v^k in K (q-powers are v^{d k'}).
    std::function<K(long)> vpow;
    K one;
    /// true when e/f images can leave the stored window (Verma truncations).
    bool truncated = false;
    /// defining weight and convention tag (sign -1: highest weight, +1: lowest).
    Weight hw;
    int sign = -1;

    int weight_index(const Weight& w) const {
        auto it = windex.find(w);
        return it == windex.end() ? -1 : it->second;
    }
    const Mat<K>* block(bool is_e, int i, int n, int wi) const {
        auto it = act.find({is_e ? 1 : 0, i, n, wi});
        return it == act.end() ? nullptr : &it->second;
    }
    long total_dim() const {
        long t = 0;
        for (int d : dim) t += d;
        return t;
    }
    std::map<Weight, int> character() const {
        std::map<Weight, int> ch;
        for (size_t i = 0; i < weights.size(); ++i) ch[weights[i]] = dim[i];
        return ch;
    }
};

using FModule = WModule<QScalar>;
using ZModule = WModule<CycScalar>;

/// Highest-weight (sign = -1) or lowest-weight (sign = +1) Verma window down
/// to the given height depth, with free PBW monomial basis.
FModule verma_module(const UAlgebra& alg, const Weight& lambda, int sign, int depth,
                     int divided_bound = 0);

/// Contravariant form Gram matrix on the Verma weight space at the given
/// weight (basis = the PBW monomials used by verma_module).
Mat<QScalar> contravariant_gram(const UAlgebra& alg, const FModule& verma, const Weight& wspace);

/// Finite-dimensional simple as the quotient of the Verma window by the
/// radical of the contravariant form. sign = -1 builds L_-(lambda) for
/// dominant lambda; sign = +1 builds L_+(lambda) for antidominant lambda.
FModule simple_module(const UAlgebra& alg, const Weight& lambda, int sign);

mpz_class weyl_dim(const RootDatum& datum, const Weight& lambda);

/// The A-lattice U_A^L . v inside a finite-dimensional simple: per weight, the
/// columns express the lattice basis in the module basis (entries in A).
struct LatticeBasis {
    std::vector<Mat<QScalar>> cols;  // per weight index, square dim x dim
    std::vector<Mat<QScalar>> inv;   // inverse transformation
};

/// If exprs is non-null, also records per weight the expression of each
/// lattice basis vector over the divided PBW monomial generators
/// (rows = monomial index, columns = basis vectors).
LatticeBasis module_lattice(const UAlgebra& alg, const FModule& simple,
                            const RootOfUnityConfig& cfg,
                            std::vector<Mat<QScalar>>* exprs = nullptr);

/// Rewrite a module in new per-weight bases (columns = new basis vectors).
FModule change_basis(const UAlgebra& alg, const FModule& m, const LatticeBasis& basis);

/// Specialize all blocks at zeta' (they must be regular).
ZModule specialize_module(const FModule& m, const RootOfUnityConfig& cfg);

/// Classical module: evaluate all blocks at v = 1 (entries must be regular
/// there). Keeps the same weights; q-powers become trivial.
WModule<mpq_class> classical_module(const FModule& m);

/// The classical module pulled back through the Frobenius morphism as a
/// module over the specialized algebra: weights are multiplied by ell and
/// only divided powers e_i^{(ell n)}, f_i^{(ell n)} act (as the classical
/// ebar^{(n)}, fbar^{(n)}).
ZModule frobenius_pullback(const WModule<mpq_class>& cm, const RootOfUnityConfig& cfg,
                           const RootDatum& datum);

/// Star dual with the antipode-twisted action; weights are negated.
template <class K>
WModule<K> star_dual_module(const RootDatum& datum, const WModule<K>& m);

/// Apply a normal-form element to a vector sitting at weight index wi.
/// Works at the generic level only (QScalar blocks with n = 1 available).
std::map<int, Vec<QScalar>> apply_uelem(const UAlgebra& alg, const FModule& m, const UElem& u,
                                        int wi, const Vec<QScalar>& v);

/// Tensor product module with the coproduct action (generic level). Basis at
/// each weight: pairs (a-th vector of m1 at w1, b-th of m2 at w2), ordered by
/// (w1 index, a, b).
FModule tensor_module(const UAlgebra& alg, const FModule& m1, const FModule& m2);

/// Index bookkeeping for tensor_module bases.
struct TensorIndex {
    // per tensor weight index: list of (w1 index, a, w2 index, b)
    std::vector<std::vector<std::tuple<int, int, int, int>>> slots;
};
TensorIndex tensor_index(const FModule& m1, const FModule& m2, const FModule& prod);

/// The braid operator of eq-Ti style on an integrable module window: returns
/// per-weight blocks of T_i^{+-1}; variant 0/1 selects the two product
/// expressions (they agree; tested). K in {QScalar, CycScalar, mpq_class}.
template <class K>
std::map<int, Mat<K>> braid_module_operator(const RootDatum& datum, const WModule<K>& m, int i,
                                            int sign, int variant = 0);

}  // namespace qroots
