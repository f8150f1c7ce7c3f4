#include "qroots/laurent.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace qroots {

void LaurentPoly::trim() {
    size_t a = 0, b = coeff_.size();
    while (b > a && coeff_[b - 1] == 0) --b;
    while (a < b && coeff_[a] == 0) ++a;
    if (a == b) {
        coeff_.clear();
        lo_ = 0;
        return;
    }
    if (a > 0 || b < coeff_.size()) {
        coeff_ = std::vector<mpz_class>(coeff_.begin() + a, coeff_.begin() + b);
        lo_ += static_cast<int>(a);
    }
}

LaurentPoly LaurentPoly::monomial(const mpz_class& c, int exp) {
    LaurentPoly p;
    if (c != 0) {
        p.lo_ = exp;
        p.coeff_.push_back(c);
    }
    return p;
}

mpz_class LaurentPoly::at(int exp) const {
    if (is_zero() || exp < lo_ || exp > hi()) return 0;
    return coeff_[exp - lo_];
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& c : r.coeff_) c = -c;
    return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    int nlo = std::min(lo_, o.lo_);
    int nhi = std::max(hi(), o.hi());
    std::vector<mpz_class> c(nhi - nlo + 1, mpz_class(0));
    for (size_t i = 0; i < coeff_.size(); ++i) c[lo_ + i - nlo] += coeff_[i];
    for (size_t i = 0; i < o.coeff_.size(); ++i) c[o.lo_ + i - nlo] += o.coeff_[i];
    return LaurentPoly(nlo, std::move(c));
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    if (is_zero() || o.is_zero()) return LaurentPoly();
    std::vector<mpz_class> c(coeff_.size() + o.coeff_.size() - 1, mpz_class(0));
    for (size_t i = 0; i < coeff_.size(); ++i)
        for (size_t j = 0; j < o.coeff_.size(); ++j) c[i + j] += coeff_[i] * o.coeff_[j];
    return LaurentPoly(lo_ + o.lo_, std::move(c));
}

LaurentPoly LaurentPoly::shifted(int dexp) const {
    if (is_zero()) return *this;
    LaurentPoly r = *this;
    r.lo_ += dexp;
    return r;
}

mpz_class LaurentPoly::content() const {
    mpz_class g = 0;
    for (const auto& c : coeff_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

namespace {

// Plain polynomial division of a by b over Q, returning true iff remainder is 0.
// a, b given as coefficient vectors (index = exponent), b nonzero.
bool divide_exact_q(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                    std::vector<mpq_class>* quot) {
    std::vector<mpq_class> rem(a.size());
    for (size_t i = 0; i < a.size(); ++i) rem[i] = a[i];
    int db = static_cast<int>(b.size()) - 1;
    int da = static_cast<int>(a.size()) - 1;
    if (da < db) {
        for (auto& r : rem)
            if (r != 0) return false;
        quot->clear();
        return true;
    }
    std::vector<mpq_class> q(da - db + 1, mpq_class(0));
    mpq_class lead(b[db]);
    for (int i = da; i >= db; --i) {
        if (rem[i] == 0) continue;
        mpq_class f = rem[i] / lead;
        q[i - db] = f;
        for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * mpq_class(b[j]);
    }
    for (auto& r : rem)
        if (r != 0) return false;
    *quot = std::move(q);
    return true;
}

std::vector<mpz_class> poly_part(const LaurentPoly& p) { return p.coeff(); }

// Primitive part with positive leading coefficient.
std::vector<mpz_class> primitive(std::vector<mpz_class> c) {
    mpz_class g = 0;
    for (const auto& x : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) return c;
    if (c.back() < 0) g = -g;
    for (auto& x : c) x /= g;
    return c;
}

// Polynomial gcd over Z via rational Euclid + primitive normalization.
std::vector<mpz_class> gcd_polys(std::vector<mpz_class> a, std::vector<mpz_class> b) {
    auto deg = [](const std::vector<mpz_class>& p) { return static_cast<int>(p.size()) - 1; };
    auto trimv = [](std::vector<mpz_class>& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    };
    trimv(a);
    trimv(b);
    if (a.empty()) return primitive(b);
    if (b.empty()) return primitive(a);
    // Work over Q to avoid coefficient explosion management; denominators cleared at the end.
    std::vector<mpq_class> x(a.begin(), a.end()), y(b.begin(), b.end());
    auto trimq = [](std::vector<mpq_class>& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    };
    while (!y.empty()) {
        // x mod y
        int dx = static_cast<int>(x.size()) - 1, dy = static_cast<int>(y.size()) - 1;
        if (dx < dy) {
            std::swap(x, y);
            continue;
        }
        mpq_class lead = y[dy];
        for (int i = dx; i >= dy; --i) {
            if (x[i] == 0) continue;
            mpq_class f = x[i] / lead;
            for (int j = 0; j <= dy; ++j) x[i - dy + j] -= f * y[j];
        }
        trimq(x);
        std::swap(x, y);
    }
    // x is the gcd over Q; clear denominators, take primitive part.
    mpz_class den = 1;
    for (const auto& c : x) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> g(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        mpq_class c = x[i] * mpq_class(den);
        g[i] = c.get_num();
    }
    (void)deg;
    return primitive(std::move(g));
}

}  // namespace

LaurentPoly LaurentPoly::div_exact(const LaurentPoly& d) const {
    if (d.is_zero()) throw std::domain_error("LaurentPoly: division by zero");
    if (is_zero()) return LaurentPoly();
    std::vector<mpq_class> q;
    if (!divide_exact_q(poly_part(*this), poly_part(d), &q))
        throw std::domain_error("LaurentPoly: inexact division");
    std::vector<mpz_class> qi(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
        if (q[i].get_den() != 1) throw std::domain_error("LaurentPoly: non-integral quotient");
        qi[i] = q[i].get_num();
    }
    return LaurentPoly(lo_ - d.lo_, std::move(qi));
}

LaurentPoly LaurentPoly::gcd(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() && b.is_zero()) return LaurentPoly();
    std::vector<mpz_class> g = gcd_polys(poly_part(a), poly_part(b));
    return LaurentPoly(0, std::move(g));
}

int LaurentPoly::multiplicity_of(const LaurentPoly& p) const {
    if (is_zero()) return 0;
    int n = 0;
    LaurentPoly cur = *this;
    for (;;) {
        std::vector<mpq_class> q;
        if (!divide_exact_q(cur.coeff(), p.coeff(), &q)) return n;
        std::vector<mpz_class> qi;
        bool integral = true;
        qi.reserve(q.size());
        for (auto& c : q) {
            if (c.get_den() != 1) {
                integral = false;
                break;
            }
            qi.push_back(c.get_num());
        }
        if (!integral) {
            // p need not be monic over Z; continue over Q by scaling (multiplicity
            // is insensitive to nonzero constants).
            mpz_class den = 1;
            for (auto& c : q) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
            qi.clear();
            for (auto& c : q) {
                mpq_class s = c * mpq_class(den);
                qi.push_back(s.get_num());
            }
        }
        cur = LaurentPoly(0, std::move(qi));
        ++n;
        if (cur.is_zero()) return n;
    }
}

std::string LaurentPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = static_cast<int>(coeff_.size()) - 1; i >= 0; --i) {
        const mpz_class& c = coeff_[i];
        if (c == 0) continue;
        int e = lo_ + i;
        mpz_class ac = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (ac != 1 || e == 0) os << ac.get_str();
        if (e != 0) {
            if (ac != 1) os << "*";
            os << "v";
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

}  // namespace qroots
