#include "qroots/qscalar.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace qroots {

QScalar::QScalar(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("QScalar: zero denominator");
    reduce();
}

void QScalar::reduce() {
    if (num_.is_zero()) {
        den_ = LaurentPoly(mpz_class(1));
        return;
    }
    // Push all v-powers of the denominator into the numerator.
    if (den_.lo() != 0) {
        num_ = num_.shifted(-den_.lo());
        den_ = den_.shifted(-den_.lo());
    }
    LaurentPoly g = LaurentPoly::gcd(num_, den_);
    if (!(g == LaurentPoly(mpz_class(1)))) {
        // gcd is computed on poly parts; align the numerator's v-offset.
        int nlo = num_.lo();
        num_ = num_.shifted(-nlo).div_exact(g).shifted(nlo);
        den_ = den_.div_exact(g);
    }
    mpz_class cn = num_.content(), cd = den_.content();
    mpz_class c;
    mpz_gcd(c.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (den_.leading() < 0) c = -c;
    if (c != 1) {
        num_ = num_.div_exact(LaurentPoly(c));
        den_ = den_.div_exact(LaurentPoly(c));
    }
}

bool QScalar::is_one() const {
    return num_ == LaurentPoly(mpz_class(1)) && den_ == LaurentPoly(mpz_class(1));
}

QScalar QScalar::operator-() const {
    QScalar r = *this;
    r.num_ = -r.num_;
    return r;
}

QScalar QScalar::operator+(const QScalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    return QScalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

QScalar QScalar::operator-(const QScalar& o) const { return *this + (-o); }

QScalar QScalar::operator*(const QScalar& o) const {
    if (is_zero() || o.is_zero()) return QScalar();
    return QScalar(num_ * o.num_, den_ * o.den_);
}

QScalar QScalar::operator/(const QScalar& o) const {
    if (o.is_zero()) throw std::domain_error("QScalar: division by zero");
    if (is_zero()) return QScalar();
    return QScalar(num_ * o.den_, den_ * o.num_);
}

QScalar QScalar::inv() const {
    if (is_zero()) throw std::domain_error("QScalar: inverse of zero");
    return QScalar(den_, num_);
}

namespace {
LaurentPoly bar_poly(const LaurentPoly& p) {
    if (p.is_zero()) return p;
    std::vector<mpz_class> c(p.coeff().rbegin(), p.coeff().rend());
    return LaurentPoly(-p.hi(), std::move(c));
}
}  // namespace

QScalar QScalar::bar() const { return QScalar(bar_poly(num_), bar_poly(den_)); }

mpq_class QScalar::eval_at_one() const {
    auto eval1 = [](const LaurentPoly& p) {
        mpz_class s = 0;
        for (const auto& c : p.coeff()) s += c;
        return s;
    };
    mpz_class d = eval1(den_);
    if (d == 0) throw std::domain_error("QScalar: pole at v = 1");
    mpq_class r(eval1(num_), d);
    r.canonicalize();
    return r;
}

std::string QScalar::str() const {
    if (is_laurent()) return num_.str();
    std::ostringstream os;
    bool nsimple = num_.is_zero() || num_.coeff().size() == 1;
    if (nsimple)
        os << num_.str();
    else
        os << "(" << num_.str() << ")";
    os << "/";
    bool dsimple = den_.coeff().size() == 1;
    if (dsimple)
        os << den_.str();
    else
        os << "(" << den_.str() << ")";
    return os.str();
}

QScalar qint(long n, int tpow) {
    // [n] = t^{n-1} + t^{n-3} + ... + t^{1-n}; [-n] = -[n].
    if (n == 0) return QScalar();
    if (n < 0) return -qint(-n, tpow);
    std::vector<mpz_class> c;
    LaurentPoly p;
    for (long j = 0; j < n; ++j) p = p + LaurentPoly::v_pow(static_cast<int>((n - 1 - 2 * j) * tpow));
    return QScalar(p);
}

QScalar qfact(long n, int tpow) {
    if (n < 0) throw std::domain_error("qfact: negative argument");
    QScalar r(1);
    for (long j = 2; j <= n; ++j) r = r * qint(j, tpow);
    return r;
}

QScalar qbinom(long n, long k, int tpow) {
    if (k < 0 || k > n) return QScalar();
    QScalar r = qfact(n, tpow) / (qfact(k, tpow) * qfact(n - k, tpow));
    return r;
}

namespace {

struct Parser {
    const std::string& s;
    size_t i = 0;
    explicit Parser(const std::string& t) : s(t) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("scalar parse error at position " + std::to_string(i) + ": " +
                                    what);
    }

    long integer() {
        skip();
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = (s[i++] == '-');
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("expected integer");
        long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }

    QScalar atom() {
        skip();
        if (eat('(')) {
            QScalar r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (i < s.size() && s[i] == 'v') {
            ++i;
            int e = 1;
            skip();
            if (i < s.size() && s[i] == '^') {
                ++i;
                e = static_cast<int>(integer());
            }
            return QScalar::v_pow(e);
        }
        if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])))) {
            long n = integer();
            return QScalar(n);
        }
        fail("expected atom");
    }

    QScalar factor() {
        skip();
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        QScalar r = atom();
        for (;;) {
            skip();
            if (i < s.size() && s[i] == '*') {
                ++i;
                r = r * atom();
            } else if (i < s.size() && s[i] == '/') {
                ++i;
                r = r / atom();
            } else if (i < s.size() &&
                       (s[i] == 'v' || s[i] == '(')) {
                // implicit product like "2v^3" or "3(...)"
                r = r * atom();
            } else {
                break;
            }
        }
        return r;
    }

    QScalar expr() {
        QScalar r = factor();
        for (;;) {
            skip();
            if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
                char op = s[i++];
                QScalar t = factor();
                r = (op == '+') ? r + t : r - t;
            } else {
                break;
            }
        }
        return r;
    }
};

}  // namespace

QScalar parse_qscalar(const std::string& text) {
    Parser p(text);
    QScalar r = p.expr();
    p.skip();
    if (p.i != text.size()) p.fail("trailing input");
    return r;
}

}  // namespace qroots
