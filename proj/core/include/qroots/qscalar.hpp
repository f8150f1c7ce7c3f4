#pragma once

#include <gmpxx.h>

#include <string>

#include "qroots/laurent.hpp"

namespace qroots {

/// Element of Q(v), v = q^{1/d}. Stored as num/den with den a genuine
/// polynomial (den.lo() == 0, nonzero constant term, positive leading
/// coefficient), gcd(num, den) = 1 and coprime integer contents, so equality
/// is structural.
class QScalar {
public:
    QScalar() = default;
    QScalar(const mpz_class& n) : num_(n), den_(mpz_class(1)) {}
    QScalar(long n) : num_(mpz_class(n)), den_(mpz_class(1)) {}
    QScalar(const mpq_class& r)
        : num_(LaurentPoly(r.get_num())), den_(LaurentPoly(r.get_den())) {}
    QScalar(LaurentPoly num, LaurentPoly den);
    explicit QScalar(const LaurentPoly& p) : num_(p), den_(mpz_class(1)) {}

    static QScalar v_pow(int e) { return QScalar(LaurentPoly::v_pow(e)); }

    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_laurent() const { return den_ == LaurentPoly(mpz_class(1)); }

    bool operator==(const QScalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const QScalar& o) const { return !(*this == o); }

    QScalar operator-() const;
    QScalar operator+(const QScalar& o) const;
    QScalar operator-(const QScalar& o) const;
    QScalar operator*(const QScalar& o) const;
    QScalar operator/(const QScalar& o) const;
    QScalar& operator+=(const QScalar& o) { return *this = *this + o; }
    QScalar& operator-=(const QScalar& o) { return *this = *this - o; }
    QScalar& operator*=(const QScalar& o) { return *this = *this * o; }
    QScalar& operator/=(const QScalar& o) { return *this = *this / o; }

    QScalar inv() const;

    /// Bar involution v -> v^{-1}.
    QScalar bar() const;

    /// Evaluation at v = 1 (throws if the denominator vanishes there).
    mpq_class eval_at_one() const;

    std::string str() const;

private:
    void reduce();
    LaurentPoly num_;
    LaurentPoly den_{mpz_class(1)};
};

/// [n]_t with t = v^{tpow}: balanced Laurent polynomial, as a QScalar.
QScalar qint(long n, int tpow);
/// [n]_t! for n >= 0 (throws on negative n).
QScalar qfact(long n, int tpow);
/// Gaussian binomial [n choose k]_t (0 unless 0 <= k <= n).
QScalar qbinom(long n, long k, int tpow);

/// Parses the scalar grammar: integers, `v^k`, products, quotients,
/// parentheses, e.g. "(v^2 - v^-2)/(v - v^-1)". Round-trips with str().
QScalar parse_qscalar(const std::string& text);

}  // namespace qroots
