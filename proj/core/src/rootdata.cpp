#include "qroots/rootdata.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qroots {

Weight weight_add(const Weight& a, const Weight& b) {
    Weight r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Weight weight_sub(const Weight& a, const Weight& b) {
    Weight r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Weight weight_neg(const Weight& a) {
    Weight r = a;
    for (auto& x : r) x = -x;
    return r;
}

Weight weight_scale(int c, const Weight& a) {
    Weight r = a;
    for (auto& x : r) x *= c;
    return r;
}

bool weight_is_zero(const Weight& a) {
    for (int x : a)
        if (x != 0) return false;
    return true;
}

bool is_dominant(const Weight& a) {
    for (int x : a)
        if (x < 0) return false;
    return true;
}

std::string weight_str(const Weight& a) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) os << ",";
        os << a[i];
    }
    os << ")";
    return os.str();
}

CartanType cartan_type_from_string(const std::string& s) {
    if (s == "A1" || s == "a1") return CartanType::A1;
    if (s == "A2" || s == "a2") return CartanType::A2;
    if (s == "B2" || s == "b2") return CartanType::B2;
    throw std::invalid_argument("unsupported Cartan type: " + s);
}

std::string cartan_type_to_string(CartanType t) {
    switch (t) {
        case CartanType::A1: return "A1";
        case CartanType::A2: return "A2";
        case CartanType::B2: return "B2";
    }
    return "?";
}

RootDatum::RootDatum(CartanType type, std::optional<std::vector<int>> w0_word) : type_(type) {
    switch (type) {
        case CartanType::A1:
            rank_ = 1;
            cartan_ = {{2}};
            dsym_ = {1};
            index_ = 2;
            weyl_order_ = 2;
            break;
        case CartanType::A2:
            rank_ = 2;
            cartan_ = {{2, -1}, {-1, 2}};
            dsym_ = {1, 1};
            index_ = 3;
            weyl_order_ = 6;
            break;
        case CartanType::B2:
            // alpha_0 long (d=2), alpha_1 short (d=1).
            rank_ = 2;
            cartan_ = {{2, -1}, {-2, 2}};
            dsym_ = {2, 1};
            index_ = 2;
            weyl_order_ = 8;
            break;
    }
    simple_roots_.resize(rank_);
    for (int j = 0; j < rank_; ++j) {
        Weight a(rank_);
        for (int i = 0; i < rank_; ++i) a[i] = cartan_[i][j];
        simple_roots_[j] = a;
    }
    rho_ = Weight(rank_, 1);
    // Inverse Cartan matrix over Q.
    {
        int n = rank_;
        std::vector<std::vector<mpq_class>> aug(n, std::vector<mpq_class>(2 * n, mpq_class(0)));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) aug[i][j] = cartan_[i][j];
            aug[i][n + i] = 1;
        }
        for (int c = 0; c < n; ++c) {
            int s = c;
            while (aug[s][c] == 0) ++s;
            std::swap(aug[s], aug[c]);
            mpq_class piv = aug[c][c];
            for (int j = 0; j < 2 * n; ++j) aug[c][j] /= piv;
            for (int i = 0; i < n; ++i) {
                if (i == c || aug[i][c] == 0) continue;
                mpq_class f = aug[i][c];
                for (int j = 0; j < 2 * n; ++j) aug[i][j] -= f * aug[c][j];
            }
        }
        cartan_inv_.assign(n, std::vector<mpq_class>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) cartan_inv_[i][j] = aug[i][n + j];
    }
    if (w0_word) {
        w0_word_ = *w0_word;
        for (int i : w0_word_)
            if (i < 0 || i >= rank_) throw std::invalid_argument("w0 word: bad generator index");
        if (!word_is_reduced(w0_word_)) throw std::invalid_argument("w0 word is not reduced");
    } else {
        find_default_word();
    }
    compute_pos_roots();
    // The word must be a reduced word *for w0*: its betas exhaust Delta^+.
    std::set<Weight> seen(pos_roots_.begin(), pos_roots_.end());
    int expected_n = (type == CartanType::A1) ? 1 : (type == CartanType::A2 ? 3 : 4);
    if (static_cast<int>(w0_word_.size()) != expected_n ||
        static_cast<int>(seen.size()) != expected_n)
        throw std::invalid_argument("w0 word does not represent the longest element");
    droot_.resize(pos_roots_.size());
    for (size_t k = 0; k < pos_roots_.size(); ++k) {
        mpq_class half = form(pos_roots_[k], pos_roots_[k]) / 2;
        droot_[k] = static_cast<int>(half.get_num().get_si());
    }
}

Weight RootDatum::fundamental_weight(int i) const {
    Weight w(rank_, 0);
    w[i] = 1;
    return w;
}

mpq_class RootDatum::form(const Weight& a, const Weight& b) const {
    // (a,b) = sum_j b_alpha[j] * (a, alpha_j) = sum_j b_alpha[j] * a_j * d_j.
    std::vector<mpq_class> balpha = alpha_coords(b);
    mpq_class r(0);
    for (int j = 0; j < rank_; ++j) r += balpha[j] * a[j] * dsym_[j];
    return r;
}

long RootDatum::form_times_index(const Weight& a, const Weight& b) const {
    mpq_class r = form(a, b) * index_;
    if (r.get_den() != 1) throw std::logic_error("form_times_index: not integral");
    return r.get_num().get_si();
}

Weight RootDatum::simple_reflect(int i, const Weight& a) const {
    Weight r = a;
    int c = a[i];
    for (int k = 0; k < rank_; ++k) r[k] -= c * cartan_[k][i];
    return r;
}

Weight RootDatum::apply_word(const std::vector<int>& word, const Weight& a) const {
    Weight r = a;
    for (auto it = word.rbegin(); it != word.rend(); ++it) r = simple_reflect(*it, r);
    return r;
}

std::vector<mpq_class> RootDatum::alpha_coords(const Weight& a) const {
    std::vector<mpq_class> r(rank_, mpq_class(0));
    for (int i = 0; i < rank_; ++i)
        for (int j = 0; j < rank_; ++j) r[i] += cartan_inv_[i][j] * a[j];
    return r;
}

bool RootDatum::in_root_lattice(const Weight& a) const {
    for (const auto& c : alpha_coords(a))
        if (c.get_den() != 1) return false;
    return true;
}

long RootDatum::height_in_Q(const Weight& a) const {
    long h = 0;
    for (const auto& c : alpha_coords(a)) {
        if (c.get_den() != 1) throw std::invalid_argument("height_in_Q: not in the root lattice");
        h += c.get_num().get_si();
    }
    return h;
}

int RootDatum::word_length(const std::vector<int>& word) const {
    // Number of positive roots sent to negative roots.
    // Enumerate Delta^+ from the default descent: use all roots via orbit of
    // the simple roots.
    std::set<Weight> pos;
    std::function<void(const Weight&)> visit = [&](const Weight& r) {
        if (pos.count(r)) return;
        pos.insert(r);
        for (int i = 0; i < rank_; ++i) {
            Weight s = simple_reflect(i, r);
            bool positive = false;
            for (const auto& c : alpha_coords(s))
                if (c > 0) positive = true;
            bool negative = false;
            for (const auto& c : alpha_coords(s))
                if (c < 0) negative = true;
            if (positive && !negative) visit(s);
        }
    };
    for (int i = 0; i < rank_; ++i) visit(simple_roots_[i]);
    int count = 0;
    for (const auto& r : pos) {
        Weight img = apply_word(word, r);
        bool neg = true;
        for (const auto& c : alpha_coords(img))
            if (c > 0) neg = false;
        if (neg) ++count;
    }
    return count;
}

bool RootDatum::word_is_reduced(const std::vector<int>& word) const {
    return word_length(word) == static_cast<int>(word.size());
}

bool RootDatum::words_equal(const std::vector<int>& a, const std::vector<int>& b) const {
    for (int i = 0; i < rank_; ++i) {
        Weight w = fundamental_weight(i);
        if (apply_word(a, w) != apply_word(b, w)) return false;
    }
    return true;
}

void RootDatum::find_default_word() {
    int n = (type_ == CartanType::A1) ? 1 : (type_ == CartanType::A2 ? 3 : 4);
    std::vector<int> word;
    std::function<bool()> dfs = [&]() -> bool {
        if (static_cast<int>(word.size()) == n) return true;
        for (int i = 0; i < rank_; ++i) {
            word.push_back(i);
            if (word_is_reduced(word) && dfs()) return true;
            word.pop_back();
        }
        return false;
    };
    if (!dfs()) throw std::logic_error("no reduced word found");
    w0_word_ = word;
}

void RootDatum::compute_pos_roots() {
    pos_roots_.clear();
    for (size_t k = 0; k < w0_word_.size(); ++k) {
        std::vector<int> prefix(w0_word_.begin(), w0_word_.begin() + k);
        pos_roots_.push_back(apply_word(prefix, simple_roots_[w0_word_[k]]));
    }
}

std::vector<std::vector<int>> RootDatum::all_reduced_words_of_w0() const {
    int n = num_positive_roots();
    std::vector<std::vector<int>> out;
    std::vector<int> word;
    std::function<void()> dfs = [&]() {
        if (static_cast<int>(word.size()) == n) {
            out.push_back(word);
            return;
        }
        for (int i = 0; i < rank_; ++i) {
            word.push_back(i);
            if (word_is_reduced(word)) dfs();
            word.pop_back();
        }
    };
    dfs();
    return out;
}

std::pair<long, Weight> RootDatum::dot_twist(const std::vector<int>& word,
                                             const Weight& lambda) const {
    Weight img = apply_word(word, lambda);
    mpq_class e = form(weight_sub(img, lambda), rho_);
    if (e.get_den() != 1) throw std::logic_error("dot_twist: non-integral exponent");
    return {e.get_num().get_si(), img};
}

std::vector<Weight> RootDatum::qplus_below(int height_bound) const {
    std::vector<Weight> out;
    if (rank_ == 1) {
        for (int a = 0; a <= height_bound; ++a) out.push_back(weight_scale(a, simple_roots_[0]));
        return out;
    }
    for (int h = 0; h <= height_bound; ++h)
        for (int a = 0; a <= h; ++a) {
            int b = h - a;
            out.push_back(weight_add(weight_scale(a, simple_roots_[0]),
                                     weight_scale(b, simple_roots_[1])));
        }
    return out;
}

}  // namespace qroots
