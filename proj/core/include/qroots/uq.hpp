#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qroots/cyclotomic.hpp"
#include "qroots/linalg.hpp"
#include "qroots/qscalar.hpp"
#include "qroots/rootdata.hpp"

namespace qroots {

/// Triangular PBW monomial f_{beta_N}^{f[N-1]} ... f_{beta_1}^{f[0]}
///   * k_lambda * e_{beta_N}^{e[N-1]} ... e_{beta_1}^{e[0]}.
struct UKey {
    std::vector<int> f;
    Weight k;
    std::vector<int> e;
    bool operator<(const UKey& o) const {
        if (f != o.f) return f < o.f;
        if (k != o.k) return k < o.k;
        return e < o.e;
    }
    bool operator==(const UKey& o) const { return f == o.f && k == o.k && e == o.e; }
};

/// Element of U_F in PBW normal form. Zero coefficients never stored.
using UElem = std::map<UKey, QScalar>;
using TensorUElem = std::map<std::pair<UKey, UKey>, QScalar>;

/// Element of U_zeta / U_zeta^L: coefficients on the monomial basis of the
/// chosen integral form (DK: plain powers, L: divided powers).
enum class IntegralForm { DK, L };
struct ZUElem {
    IntegralForm form = IntegralForm::DK;
    std::map<UKey, CycScalar> terms;
};

/// Image of the Frobenius morphism: element of U(n^-) (x) U(n^+) spanned by
/// classical divided-power PBW monomials (the torus factor maps to 1).
struct ClassicalBi {
    std::map<std::pair<std::vector<int>, std::vector<int>>, CycScalar> terms;
};

/// A free word in the Chevalley generators of one unipotent half.
using HalfWord = std::vector<int>;
/// Linear combination of half words (one fixed weight in practice).
using WordVec = std::map<HalfWord, QScalar>;

enum class Side { Plus, Minus };

/// The quantized enveloping algebra over Q(q^{1/d}) for a fixed root datum
/// and w0 word. Holds all straightening/memo tables; all methods exact.
class UAlgebra {
public:
    explicit UAlgebra(RootDatum datum, int height_bound = 8);

    const RootDatum& datum() const { return datum_; }
    int height_bound() const { return ht_bound_; }
    int num_roots() const { return n_; }

    // --- basic scalars
    /// q^{(a,b)} as a power of v.
    QScalar qpow_form(const Weight& a, const Weight& b) const;
    /// q_i = q^{(alpha_i,alpha_i)/2}; exponent of v for [n]_{q_i} style calls.
    int tpow_simple(int i) const { return datum_.lattice_index() * datum_.d_sym(i); }
    int tpow_root(int k) const { return datum_.lattice_index() * datum_.d_sym_root(k); }

    // --- element constructors
    UElem zero() const { return {}; }
    UElem one() const;
    UElem gen_e(int i) const;
    UElem gen_f(int i) const;
    UElem gen_k(const Weight& lam) const;
    UElem scalar(const QScalar& c) const;
    /// Plain power monomial of a single root vector.
    UElem root_power(Side side, int root_idx, int m) const;
    /// e_{beta_k} / f_{beta_k} as UElem (unit PBW monomial by construction).
    UElem root_vector(Side side, int root_idx) const;

    // --- algebra structure
    UElem add(const UElem& a, const UElem& b) const;
    UElem sub(const UElem& a, const UElem& b) const;
    UElem smul(const QScalar& c, const UElem& a) const;
    UElem multiply(const UElem& a, const UElem& b) const;
    UElem commutator(const UElem& a, const UElem& b) const;
    UElem power(const UElem& a, int n) const;

    /// Normal form of a word in generators given as a list of factors.
    UElem normal_form(const std::vector<UElem>& word) const;

    // --- Hopf structure
    TensorUElem coproduct(const UElem& a) const;
    QScalar counit(const UElem& a) const;
    UElem antipode(const UElem& a) const;
    TensorUElem tensor_multiply(const TensorUElem& a, const TensorUElem& b) const;
    /// (Delta (x) id)Delta and (id (x) Delta)Delta as 3-tensors, for tests.
    std::map<std::tuple<UKey, UKey, UKey>, QScalar> coproduct2(const UElem& a) const;

    // --- braid group action
    UElem braid(int i, int sign, const UElem& a) const;
    UElem braid_word(const std::vector<int>& word, int sign, const UElem& a) const;

    // --- gradings and projections
    /// Q-weight of a monomial: sum e-part roots minus f-part roots.
    Weight key_weight(const UKey& k) const;
    bool is_homogeneous(const UElem& a, Weight* wt = nullptr) const;
    /// Triangular projection epsilon (x) 1 (x) epsilon onto the group algebra:
    /// keeps only the pure k_lambda terms (the Harish-Chandra map on central
    /// elements).
    std::map<Weight, QScalar> hc_project(const UElem& a) const;

    // --- integral forms, specialization, Frobenius
    /// Coefficient readout in the chosen integral basis.
    std::map<UKey, QScalar> integral_coeffs(const UElem& a, IntegralForm form) const;
    /// The ratio between the plain monomial and the form's basis monomial,
    /// i.e. plain = unit_factor * basis_element.
    QScalar form_unit_factor(const UKey& key, IntegralForm form) const;
    bool coeffs_regular(const UElem& a, IntegralForm form, const RootOfUnityConfig& cfg) const;
    ZUElem specialize_u(const UElem& a, const RootOfUnityConfig& cfg, IntegralForm form) const;
    /// Lift a specialized element back to U_F by polynomial representatives.
    UElem lift(const ZUElem& a) const;
    ZUElem zmul(const ZUElem& a, const ZUElem& b, const RootOfUnityConfig& cfg) const;
    ZUElem zadd(const ZUElem& a, const ZUElem& b) const;
    ZUElem zsub(const ZUElem& a, const ZUElem& b) const;

    /// Lusztig Frobenius on the representable span (terms F k_lambda E in the
    /// divided basis): divided powers with all exponents divisible by ell map
    /// to classical divided monomials, others to 0; k_lambda to 1.
    ClassicalBi frobenius_pi(const ZUElem& a, const RootOfUnityConfig& cfg) const;

    // --- word-level machinery (exposed for pairing/reps)
    /// Expansion of a one-sided PBW monomial into Chevalley words.
    const WordVec& pbw_expansion(Side side, const std::vector<int>& mono) const;
    /// List of PBW exponent vectors of the given Q^+ weight.
    const std::vector<std::vector<int>>& pbw_monomials(Side side, const Weight& gamma) const;
    /// Convert a word-combination of fixed weight into PBW coordinates.
    std::map<std::vector<int>, QScalar> words_to_pbw(Side side, const WordVec& wv,
                                                     const Weight& gamma) const;
    /// One-sided product in PBW coordinates.
    const UElem& pbw_product(Side side, const std::vector<int>& a, const std::vector<int>& b) const;
    /// Commutation of an E-monomial past an F-monomial, in normal form.
    const UElem& ef_commute(const std::vector<int>& emono, const std::vector<int>& fmono) const;
    /// Half coproduct of a one-sided PBW monomial; keys have only that side
    /// plus a k-part.
    const TensorUElem& half_coproduct(Side side, const std::vector<int>& mono) const;
    /// Antipode of a one-sided PBW monomial (normal form, stays in the half).
    const UElem& half_antipode(Side side, const std::vector<int>& mono) const;
    /// Classical (v=1) structure constants of U(n^pm) on the PBW basis.
    std::map<std::vector<int>, mpq_class> classical_pbw_product(Side side,
                                                                const std::vector<int>& a,
                                                                const std::vector<int>& b) const;

    /// Weight of a one-sided exponent vector.
    Weight side_weight(Side side, const std::vector<int>& mono) const;
    long side_height(const std::vector<int>& mono) const;

    std::string str(const UElem& a) const;
    std::string str_tensor(const TensorUElem& a) const;

private:
    RootDatum datum_;
    int ht_bound_;
    int n_;

    struct WordSpace {
        std::vector<HalfWord> words;           // all words of this weight, lex order
        std::map<HalfWord, int> index;
        RowSpan<QScalar> serre;                // echelon span of the Serre ideal piece
    };
    struct PbwSpace {
        std::vector<std::vector<int>> monos;   // exponent vectors, lex order
        std::map<std::vector<int>, int> index;
        // reduced word-space coordinates of each PBW monomial
        std::vector<Vec<QScalar>> expansion;
        // augmented span for converting reduced vectors to PBW coordinates
        RowSpan<QScalar> solver;
    };

    // Raw triangular element on words (bootstrap representation).
    struct TriKey {
        HalfWord f;
        Weight k;
        HalfWord e;
        bool operator<(const TriKey& o) const {
            if (f != o.f) return f < o.f;
            if (k != o.k) return k < o.k;
            return e < o.e;
        }
    };
    using TriElem = std::map<TriKey, QScalar>;

    mutable std::map<std::pair<int, Weight>, WordSpace> word_spaces_;  // (side, gamma)
    mutable std::map<std::pair<int, Weight>, PbwSpace> pbw_spaces_;
    mutable std::map<std::pair<int, std::vector<int>>, WordVec> pbw_expansions_;
    mutable std::map<std::tuple<int, std::vector<int>, std::vector<int>>, UElem> pbw_products_;
    mutable std::map<std::pair<std::vector<int>, std::vector<int>>, UElem> ef_commute_;
    mutable std::map<std::pair<int, std::vector<int>>, TensorUElem> half_coproducts_;
    mutable std::map<std::pair<int, std::vector<int>>, UElem> half_antipodes_;
    // Serre-reduced word combinations representing the root vectors.
    mutable std::vector<WordVec> root_reps_plus_, root_reps_minus_;

    const WordSpace& word_space(Side side, const Weight& gamma) const;
    const PbwSpace& pbw_space(Side side, const Weight& gamma) const;
    void build_root_reps() const;

    // Triangular (bootstrap) calculus on raw words.
    TriElem tri_one() const;
    TriElem tri_mul(const TriElem& a, const TriElem& b) const;
    TriElem tri_smul(const QScalar& c, const TriElem& a) const;
    TriElem tri_add(const TriElem& a, const TriElem& b) const;
    /// e_i . (f-word): def3 commutation, result raw triangular.
    TriElem commute_e_past_fword(int i, const HalfWord& fw) const;
    TriElem commute_eword_past_fword(const HalfWord& ew, const HalfWord& fw) const;
    TriElem braid_gen_image(int i, int sign, int gen_kind /*0=e,1=f*/, int j) const;
    TriElem braid_tri(int i, int sign, const TriElem& a) const;
    UElem tri_to_normal(const TriElem& a) const;

    void add_term(UElem& dst, const UKey& key, const QScalar& c) const;
    int check_ht(const std::vector<int>& mono) const;
};

/// Convenience: the sum of heights touched by an element (for bound checks).
long uelem_max_height(const UAlgebra& alg, const UElem& a);

}  // namespace qroots
