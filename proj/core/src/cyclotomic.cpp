#include "qroots/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qroots {

namespace {

// x^n - 1 as ascending coefficients.
std::vector<mpz_class> xn_minus_1(int n) {
    std::vector<mpz_class> p(n + 1, mpz_class(0));
    p[0] = -1;
    p[n] = 1;
    return p;
}

// Exact division of integer polynomials (ascending coefficients).
std::vector<mpz_class> div_exact_z(const std::vector<mpz_class>& a,
                                   const std::vector<mpz_class>& b) {
    std::vector<mpz_class> rem = a, q(a.size() - b.size() + 1, mpz_class(0));
    int db = static_cast<int>(b.size()) - 1;
    for (int i = static_cast<int>(rem.size()) - 1; i >= db; --i) {
        if (rem[i] == 0) continue;
        mpz_class f = rem[i] / b[db];
        q[i - db] = f;
        for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b[j];
    }
    for (const auto& c : rem)
        if (c != 0) throw std::logic_error("cyclotomic: inexact division");
    return q;
}

std::vector<mpz_class> cyclotomic_poly(int n) {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d.
    std::vector<mpz_class> num = xn_minus_1(n);
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        num = div_exact_z(num, cyclotomic_poly(d));
    }
    return num;
}

}  // namespace

CycField::CycField(int ell) : ell_(ell) {
    if (ell < 2) throw std::invalid_argument("CycField: ell must be > 1");
    phi_ = cyclotomic_poly(ell);
}

std::shared_ptr<const CycField> CycField::get(int ell) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const CycField>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(ell);
    if (it != cache.end()) return it->second;
    auto f = std::make_shared<const CycField>(ell);
    cache[ell] = f;
    return f;
}

CycScalar::CycScalar(std::shared_ptr<const CycField> fld, std::vector<mpq_class> c)
    : fld_(std::move(fld)), c_(std::move(c)) {
    normalize();
}

void CycScalar::normalize() {
    if (!fld_) {
        c_.clear();
        return;
    }
    const auto& phi = fld_->phi();
    int deg = fld_->degree();
    // Reduce mod Phi (monic).
    for (int i = static_cast<int>(c_.size()) - 1; i >= deg; --i) {
        mpq_class f = c_[i];
        if (f == 0) continue;
        for (int j = 0; j <= deg; ++j) c_[i - deg + j] -= f * mpq_class(phi[j]);
    }
    if (static_cast<int>(c_.size()) > deg) c_.resize(deg);
    c_.resize(deg, mpq_class(0));
    for (auto& x : c_) x.canonicalize();
}

CycScalar CycScalar::zero(const std::shared_ptr<const CycField>& fld) {
    return CycScalar(fld, {});
}

CycScalar CycScalar::one(const std::shared_ptr<const CycField>& fld) {
    return from_rational(fld, 1);
}

CycScalar CycScalar::from_rational(const std::shared_ptr<const CycField>& fld,
                                   const mpq_class& r) {
    std::vector<mpq_class> c(1, r);
    return CycScalar(fld, std::move(c));
}

CycScalar CycScalar::root_pow(const std::shared_ptr<const CycField>& fld, long e) {
    long m = fld->ell();
    long r = ((e % m) + m) % m;
    std::vector<mpq_class> c(r + 1, mpq_class(0));
    c[r] = 1;
    return CycScalar(fld, std::move(c));
}

bool CycScalar::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool CycScalar::is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

bool CycScalar::is_rational(mpq_class* out) const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    if (out) *out = c_.empty() ? mpq_class(0) : c_[0];
    return true;
}

bool CycScalar::operator==(const CycScalar& o) const {
    if (is_zero() && o.is_zero()) return true;
    if (!fld_ || !o.fld_) return false;
    if (fld_->ell() != o.fld_->ell()) return false;
    return c_ == o.c_;
}

CycScalar CycScalar::operator-() const {
    CycScalar r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

namespace {
const std::shared_ptr<const CycField>& pick_field(const CycScalar& a, const CycScalar& b) {
    if (a.field()) {
        if (b.field() && b.field()->ell() != a.field()->ell())
            throw std::invalid_argument("CycScalar: mixed cyclotomic fields");
        return a.field();
    }
    return b.field();
}
}  // namespace

CycScalar CycScalar::operator+(const CycScalar& o) const {
    auto fld = pick_field(*this, o);
    if (!fld) return CycScalar();
    std::vector<mpq_class> c(fld->degree(), mpq_class(0));
    for (size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
    return CycScalar(fld, std::move(c));
}

CycScalar CycScalar::operator-(const CycScalar& o) const { return *this + (-o); }

CycScalar CycScalar::operator*(const CycScalar& o) const {
    auto fld = pick_field(*this, o);
    if (!fld || is_zero() || o.is_zero()) return fld ? zero(fld) : CycScalar();
    std::vector<mpq_class> c(c_.size() + o.c_.size(), mpq_class(0));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
    }
    return CycScalar(fld, std::move(c));
}

CycScalar CycScalar::inv() const {
    if (is_zero()) throw std::domain_error("CycScalar: inverse of zero");
    // Extended Euclid in Q[x] against Phi.
    const auto& phiz = fld_->phi();
    std::vector<mpq_class> r0(phiz.begin(), phiz.end());
    std::vector<mpq_class> r1 = c_;
    std::vector<mpq_class> s0{}, s1{mpq_class(1)};  // Bezout coefficients for this
    auto trim = [](std::vector<mpq_class>& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    };
    trim(r1);
    for (;;) {
        // r0 = q*r1 + r2
        if (r1.empty()) throw std::logic_error("CycScalar: not invertible (non-prime modulus?)");
        if (static_cast<int>(r1.size()) == 1) {
            // gcd is the constant r1[0]; inverse = s1 / r1[0]
            std::vector<mpq_class> res(s1.size());
            for (size_t i = 0; i < s1.size(); ++i) res[i] = s1[i] / r1[0];
            return CycScalar(fld_, std::move(res));
        }
        std::vector<mpq_class> rem = r0;
        std::vector<mpq_class> q(std::max<size_t>(1, rem.size() >= r1.size() ? rem.size() - r1.size() + 1 : 1),
                                 mpq_class(0));
        int d1 = static_cast<int>(r1.size()) - 1;
        for (int i = static_cast<int>(rem.size()) - 1; i >= d1; --i) {
            if (rem[i] == 0) continue;
            mpq_class f = rem[i] / r1[d1];
            q[i - d1] = f;
            for (int j = 0; j <= d1; ++j) rem[i - d1 + j] -= f * r1[j];
        }
        trim(rem);
        // s2 = s0 - q*s1
        std::vector<mpq_class> s2 = s0;
        s2.resize(std::max(s2.size(), q.size() + (s1.empty() ? 0 : s1.size() - 1) + 1), mpq_class(0));
        for (size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
        }
        trim(s2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
}

CycScalar CycScalar::operator/(const CycScalar& o) const { return *this * o.inv(); }

CycScalar CycScalar::conj() const {
    if (!fld_) return *this;
    CycScalar r = zero(fld_);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        r += CycScalar(fld_, std::vector<mpq_class>{c_[i]}) *
             root_pow(fld_, -static_cast<long>(i));
    }
    return r;
}

std::string CycScalar::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        mpq_class a = c_[i];
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
            first = false;
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        if (i == 0 || a != 1) os << a.get_str();
        if (i > 0) {
            if (a != 1) os << "*";
            os << "z";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::string RootOfUnityConfig::violated_condition() const {
    if (ell <= 1 || ell % 2 == 0) return "(a) ell must be odd and > 1";
    if (type_g2 && ell % 3 == 0) return "(b) ell must be prime to 3 for type G2";
    if (std::gcd(ell, lattice_index) != 1) return "(c) ell must be prime to |Lambda/Q|";
    return "";
}

RootOfUnityConfig make_root_config(int ell, int lattice_index, bool type_g2) {
    RootOfUnityConfig cfg;
    cfg.ell = ell;
    cfg.lattice_index = lattice_index;
    cfg.type_g2 = type_g2;
    std::string bad = cfg.violated_condition();
    if (!bad.empty()) throw std::invalid_argument("root-of-unity config rejected: " + bad);
    cfg.field = CycField::get(ell);
    return cfg;
}

namespace {
// Evaluate a Laurent polynomial at v = zeta'.
CycScalar eval_poly(const LaurentPoly& p, const RootOfUnityConfig& cfg) {
    CycScalar r = CycScalar::zero(cfg.field);
    if (p.is_zero()) return r;
    const auto& c = p.coeff();
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        r += CycScalar::from_rational(cfg.field, mpq_class(c[i])) *
             CycScalar::root_pow(cfg.field, p.lo() + static_cast<long>(i));
    }
    return r;
}

LaurentPoly phi_as_laurent(const RootOfUnityConfig& cfg) {
    return LaurentPoly(0, cfg.field->phi());
}
}  // namespace

bool regular_at_root(const QScalar& f, const RootOfUnityConfig& cfg) {
    if (f.is_zero()) return true;
    return f.den().multiplicity_of(phi_as_laurent(cfg)) == 0;
}

int valuation_at_root(const QScalar& f, const RootOfUnityConfig& cfg) {
    if (f.is_zero()) return kValuationOfZero;
    LaurentPoly phi = phi_as_laurent(cfg);
    return f.num().multiplicity_of(phi) - f.den().multiplicity_of(phi);
}

CycScalar specialize(const QScalar& f, const RootOfUnityConfig& cfg) {
    if (f.is_zero()) return CycScalar::zero(cfg.field);
    if (!regular_at_root(f, cfg))
        throw std::domain_error("specialize: pole at zeta' (not in the local ring A)");
    CycScalar den = eval_poly(f.den(), cfg);
    return eval_poly(f.num(), cfg) / den;
}

}  // namespace qroots
