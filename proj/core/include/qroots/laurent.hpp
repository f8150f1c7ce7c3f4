#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace qroots {

/// Laurent polynomial in one variable v with integer coefficients.
/// Stored as coeff[i] * v^(lo+i) with nonzero boundary coefficients
/// (zero is the empty coefficient vector with lo == 0).
class LaurentPoly {
public:
    LaurentPoly() : lo_(0) {}
    explicit LaurentPoly(const mpz_class& c) : lo_(0) {
        if (c != 0) coeff_.push_back(c);
    }
    explicit LaurentPoly(long c) : LaurentPoly(mpz_class(c)) {}
    LaurentPoly(int lo, std::vector<mpz_class> coeff) : lo_(lo), coeff_(std::move(coeff)) {
        trim();
    }

    static LaurentPoly monomial(const mpz_class& c, int exp);
    static LaurentPoly v_pow(int exp) { return monomial(1, exp); }

    bool is_zero() const { return coeff_.empty(); }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(coeff_.size()) - 1; }
    const std::vector<mpz_class>& coeff() const { return coeff_; }
    mpz_class at(int exp) const;
    const mpz_class& leading() const { return coeff_.back(); }
    const mpz_class& trailing() const { return coeff_.front(); }

    bool operator==(const LaurentPoly& o) const { return lo_ == o.lo_ && coeff_ == o.coeff_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    LaurentPoly operator-() const;
    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly shifted(int dexp) const;  // multiply by v^dexp

    /// gcd of all coefficients, non-negative.
    mpz_class content() const;

    /// Exact division; aborts if not divisible (internal-use contract).
    LaurentPoly div_exact(const LaurentPoly& d) const;

    /// Primitive gcd over Z[v] of the polynomial parts (v-powers stripped).
    /// Result is primitive with positive leading coefficient and lo() == 0.
    static LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b);

    /// Number of times the (v-coprime) polynomial p divides this.
    int multiplicity_of(const LaurentPoly& p) const;

    std::string str() const;

private:
    void trim();
    int lo_;
    std::vector<mpz_class> coeff_;
};

}  // namespace qroots
