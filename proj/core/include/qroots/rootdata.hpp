#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace qroots {

/// Lattice element in fundamental-weight coordinates (lambda_i = (lambda, alpha_i^vee)).
using Weight = std::vector<int>;

Weight weight_add(const Weight& a, const Weight& b);
Weight weight_sub(const Weight& a, const Weight& b);
Weight weight_neg(const Weight& a);
Weight weight_scale(int c, const Weight& a);
bool weight_is_zero(const Weight& a);
bool is_dominant(const Weight& a);
std::string weight_str(const Weight& a);

enum class CartanType { A1, A2, B2 };

CartanType cartan_type_from_string(const std::string& s);
std::string cartan_type_to_string(CartanType t);

/// Root-system and lattice combinatorics for the supported rank <= 2 types.
/// Immutable after construction.
class RootDatum {
public:
    /// Builds the datum; w0_word defaults to the lexicographically smallest
    /// reduced word of the longest element. Throws on a non-reduced word or a
    /// word that is not w0.
    explicit RootDatum(CartanType type, std::optional<std::vector<int>> w0_word = std::nullopt);

    CartanType type() const { return type_; }
    int rank() const { return rank_; }
    /// |Lambda/Q|.
    int lattice_index() const { return index_; }
    int num_positive_roots() const { return static_cast<int>(pos_roots_.size()); }
    const std::vector<int>& w0_word() const { return w0_word_; }
    /// beta_k = s_{i_1}...s_{i_{k-1}}(alpha_{i_k}), 0-based k.
    const Weight& pos_root(int k) const { return pos_roots_[k]; }
    const std::vector<Weight>& pos_roots() const { return pos_roots_; }
    const Weight& rho() const { return rho_; }
    Weight fundamental_weight(int i) const;
    const Weight& simple_root(int i) const { return simple_roots_[i]; }
    /// d_i = (alpha_i, alpha_i)/2.
    int d_sym(int i) const { return dsym_[i]; }
    /// (beta,beta)/2 for a positive root.
    int d_sym_root(int k) const { return droot_[k]; }
    /// Cartan entry a_{ij} = 2(alpha_i,alpha_j)/(alpha_i,alpha_i).
    int cartan(int i, int j) const { return cartan_[i][j]; }

    /// W-invariant form with (alpha,alpha) = 2 on short roots; values in (1/d)Z.
    mpq_class form(const Weight& a, const Weight& b) const;
    /// d * (a,b), guaranteed integral; exponent of v in q^{(a,b)} = v^{d(a,b)}.
    long form_times_index(const Weight& a, const Weight& b) const;
    /// (a, alpha_i^vee) — just the i-th coordinate.
    static int pair_coroot(const Weight& a, int i) { return a[i]; }

    Weight simple_reflect(int i, const Weight& a) const;
    Weight apply_word(const std::vector<int>& word, const Weight& a) const;
    /// Coordinates of a in the simple-root basis (rational for general weights).
    std::vector<mpq_class> alpha_coords(const Weight& a) const;
    /// Height of an element of Q (throws if a is not in the root lattice).
    long height_in_Q(const Weight& a) const;
    bool in_root_lattice(const Weight& a) const;

    int weyl_order() const { return weyl_order_; }
    bool word_is_reduced(const std::vector<int>& word) const;
    int word_length(const std::vector<int>& word) const;
    /// True if the two words define the same Weyl group element.
    bool words_equal(const std::vector<int>& a, const std::vector<int>& b) const;
    std::vector<std::vector<int>> all_reduced_words_of_w0() const;

    /// Twisted action w o e(lambda) = q^{(w lambda - lambda, rho)} e(w lambda):
    /// returns the exponent (an integer) and the image.
    std::pair<long, Weight> dot_twist(const std::vector<int>& word, const Weight& lambda) const;

    /// Elements of Q^+ with height <= bound, sorted by height.
    std::vector<Weight> qplus_below(int height_bound) const;

private:
    CartanType type_;
    int rank_;
    int index_;
    int weyl_order_;
    std::vector<std::vector<int>> cartan_;
    std::vector<int> dsym_;
    std::vector<int> droot_;
    std::vector<Weight> simple_roots_;
    std::vector<Weight> pos_roots_;
    Weight rho_;
    std::vector<int> w0_word_;
    std::vector<std::vector<mpq_class>> cartan_inv_;

    void find_default_word();
    void compute_pos_roots();
};

}  // namespace qroots
