#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

namespace qroots {

// Dense exact linear algebra over a field type K (QScalar, CycScalar, mpq_class).
// K needs: default ctor = 0, +, -, *, /, is_zero-like via == K().

template <class K>
using Vec = std::vector<K>;
template <class K>
using Mat = std::vector<std::vector<K>>;

template <class K>
bool vec_is_zero(const Vec<K>& v) {
    K z{};
    for (const auto& x : v)
        if (!(x == z)) return false;
    return true;
}

template <class K>
Mat<K> identity_mat(int n, const K& one) {
    Mat<K> m(n, Vec<K>(n, K{}));
    for (int i = 0; i < n; ++i) m[i][i] = one;
    return m;
}

template <class K>
Mat<K> mat_mul(const Mat<K>& a, const Mat<K>& b) {
    if (a.empty() || b.empty()) return {};
    size_t n = a.size(), m = b[0].size(), k = b.size();
    Mat<K> c(n, Vec<K>(m, K{}));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == K{}) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

template <class K>
Vec<K> mat_vec(const Mat<K>& a, const Vec<K>& x) {
    Vec<K> y(a.size(), K{});
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) {
            if (a[i][j] == K{} || x[j] == K{}) continue;
            y[i] += a[i][j] * x[j];
        }
    return y;
}

template <class K>
Mat<K> mat_add(const Mat<K>& a, const Mat<K>& b) {
    Mat<K> c = a;
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < c[i].size(); ++j) c[i][j] += b[i][j];
    return c;
}

template <class K>
Mat<K> mat_scale(const Mat<K>& a, const K& s) {
    Mat<K> c = a;
    for (auto& row : c)
        for (auto& x : row) x *= s;
    return c;
}

/// Incremental reduced row echelon span with unit pivots.
template <class K>
struct RowSpan {
    std::vector<Vec<K>> rows;
    std::vector<int> leads;

    /// Reduces v in place against the current span.
    void reduce(Vec<K>& v) const {
        K z{};
        for (size_t r = 0; r < rows.size(); ++r) {
            const K& c = v[leads[r]];
            if (c == z) continue;
            K f = c;  // pivot is 1
            for (size_t j = 0; j < v.size(); ++j) {
                if (rows[r][j] == z) continue;
                v[j] -= f * rows[r][j];
            }
        }
    }

    /// Reduces and inserts if independent. Returns true if the span grew.
    bool insert(Vec<K> v) {
        K z{};
        reduce(v);
        int lead = -1;
        for (size_t j = 0; j < v.size(); ++j)
            if (!(v[j] == z)) {
                lead = static_cast<int>(j);
                break;
            }
        if (lead < 0) return false;
        K piv = v[lead];
        for (auto& x : v) x = x / piv;
        // Back-substitute into existing rows to keep the basis reduced.
        for (size_t r = 0; r < rows.size(); ++r) {
            K c = rows[r][lead];
            if (c == z) continue;
            for (size_t j = 0; j < v.size(); ++j) {
                if (v[j] == z) continue;
                rows[r][j] -= c * v[j];
            }
        }
        rows.push_back(std::move(v));
        leads.push_back(lead);
        return true;
    }

    bool contains(Vec<K> v) const {
        reduce(v);
        return vec_is_zero(v);
    }

    int rank() const { return static_cast<int>(rows.size()); }
};

template <class K>
int mat_rank(const Mat<K>& a) {
    RowSpan<K> s;
    for (const auto& row : a) s.insert(row);
    return s.rank();
}

/// Solves A x = b (A given row-wise, m x n). Returns one solution or nullopt.
template <class K>
std::optional<Vec<K>> solve_linear(const Mat<K>& a, const Vec<K>& b) {
    if (a.empty()) return vec_is_zero(b) ? std::optional<Vec<K>>(Vec<K>{}) : std::nullopt;
    size_t m = a.size(), n = a[0].size();
    K z{};
    // Augmented elimination.
    Mat<K> aug(m, Vec<K>(n + 1, z));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n] = b[i];
    }
    std::vector<int> pivcol;
    size_t row = 0;
    for (size_t col = 0; col < n && row < m; ++col) {
        size_t sel = row;
        while (sel < m && aug[sel][col] == z) ++sel;
        if (sel == m) continue;
        std::swap(aug[sel], aug[row]);
        K piv = aug[row][col];
        for (size_t j = col; j <= n; ++j) aug[row][j] = aug[row][j] / piv;
        for (size_t i = 0; i < m; ++i) {
            if (i == row || aug[i][col] == z) continue;
            K f = aug[i][col];
            for (size_t j = col; j <= n; ++j) aug[i][j] -= f * aug[row][j];
        }
        pivcol.push_back(static_cast<int>(col));
        ++row;
    }
    for (size_t i = row; i < m; ++i)
        if (!(aug[i][n] == z)) return std::nullopt;
    Vec<K> x(n, z);
    for (size_t r = 0; r < pivcol.size(); ++r) x[pivcol[r]] = aug[r][n];
    return x;
}

/// Inverse of a square matrix; throws if singular.
template <class K>
Mat<K> mat_inverse(const Mat<K>& a, const K& one) {
    size_t n = a.size();
    K z{};
    Mat<K> aug(n, Vec<K>(2 * n, z));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = one;
    }
    for (size_t col = 0; col < n; ++col) {
        size_t sel = col;
        while (sel < n && aug[sel][col] == z) ++sel;
        if (sel == n) throw std::domain_error("mat_inverse: singular matrix");
        std::swap(aug[sel], aug[col]);
        K piv = aug[col][col];
        for (size_t j = 0; j < 2 * n; ++j) aug[col][j] = aug[col][j] / piv;
        for (size_t i = 0; i < n; ++i) {
            if (i == col || aug[i][col] == z) continue;
            K f = aug[i][col];
            for (size_t j = 0; j < 2 * n; ++j) aug[i][j] -= f * aug[col][j];
        }
    }
    Mat<K> inv(n, Vec<K>(n, z));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

/// Basis of the null space {x : A x = 0} for A m x n.
template <class K>
Mat<K> mat_kernel(const Mat<K>& a, const K& one) {
    if (a.empty()) return {};
    size_t m = a.size(), n = a[0].size();
    K z{};
    Mat<K> red = a;
    std::vector<int> pivof(n, -1);
    size_t row = 0;
    for (size_t col = 0; col < n && row < m; ++col) {
        size_t sel = row;
        while (sel < m && red[sel][col] == z) ++sel;
        if (sel == m) continue;
        std::swap(red[sel], red[row]);
        K piv = red[row][col];
        for (size_t j = col; j < n; ++j) red[row][j] = red[row][j] / piv;
        for (size_t i = 0; i < m; ++i) {
            if (i == row || red[i][col] == z) continue;
            K f = red[i][col];
            for (size_t j = col; j < n; ++j) red[i][j] -= f * red[row][j];
        }
        pivof[col] = static_cast<int>(row);
        ++row;
    }
    Mat<K> basis;
    for (size_t col = 0; col < n; ++col) {
        if (pivof[col] >= 0) continue;
        Vec<K> x(n, z);
        x[col] = one;
        for (size_t c = 0; c < n; ++c)
            if (pivof[c] >= 0) x[c] = z - red[pivof[c]][col];
        basis.push_back(std::move(x));
    }
    return basis;
}

}  // namespace qroots
