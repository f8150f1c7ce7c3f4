#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

#include "qroots/qscalar.hpp"

namespace qroots {

/// Q(zeta'), zeta' a fixed primitive ell-th root of unity, realized as
/// Q[x]/Phi_ell(x). Shared immutable context for CycScalar values.
class CycField {
public:
    explicit CycField(int ell);

    int ell() const { return ell_; }
    int degree() const { return static_cast<int>(phi_.size()) - 1; }
    /// Coefficients of Phi_ell, ascending, integer.
    const std::vector<mpz_class>& phi() const { return phi_; }

    static std::shared_ptr<const CycField> get(int ell);

private:
    int ell_;
    std::vector<mpz_class> phi_;
};

/// Exact element of Q(zeta') in the power basis 1, zeta', ..., zeta'^{deg-1}.
class CycScalar {
public:
    CycScalar() = default;
    CycScalar(std::shared_ptr<const CycField> fld, std::vector<mpq_class> c);
    static CycScalar zero(const std::shared_ptr<const CycField>& fld);
    static CycScalar one(const std::shared_ptr<const CycField>& fld);
    static CycScalar from_rational(const std::shared_ptr<const CycField>& fld, const mpq_class& r);
    /// zeta'^e for any integer e (reduced mod ell).
    static CycScalar root_pow(const std::shared_ptr<const CycField>& fld, long e);

    const std::shared_ptr<const CycField>& field() const { return fld_; }
    const std::vector<mpq_class>& coeff() const { return c_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational(mpq_class* out = nullptr) const;

    bool operator==(const CycScalar& o) const;
    bool operator!=(const CycScalar& o) const { return !(*this == o); }

    CycScalar operator-() const;
    CycScalar operator+(const CycScalar& o) const;
    CycScalar operator-(const CycScalar& o) const;
    CycScalar operator*(const CycScalar& o) const;
    CycScalar operator/(const CycScalar& o) const;
    CycScalar& operator+=(const CycScalar& o) { return *this = *this + o; }
    CycScalar& operator-=(const CycScalar& o) { return *this = *this - o; }
    CycScalar& operator*=(const CycScalar& o) { return *this = *this * o; }
    CycScalar& operator/=(const CycScalar& o) { return *this = *this / o; }

    CycScalar inv() const;
    /// Complex conjugate (zeta' -> zeta'^{-1}).
    CycScalar conj() const;

    std::string str() const;

private:
    std::shared_ptr<const CycField> fld_;
    std::vector<mpq_class> c_;  // size degree(), zero scalar allowed as empty
    void normalize();
};

/// Specialization data of section 1.3: an odd ell with the type conditions,
/// plus the target cyclotomic field.
struct RootOfUnityConfig {
    int ell = 3;
    int lattice_index = 1;  // d = |Lambda/Q|
    bool type_g2 = false;
    std::shared_ptr<const CycField> field;

    /// Validates (a) ell odd, (b) prime to 3 for G2, (c) prime to d.
    /// Returns the violated condition name, or empty string if valid.
    std::string violated_condition() const;
};

RootOfUnityConfig make_root_config(int ell, int lattice_index, bool type_g2 = false);

/// True iff f (reduced) has no pole at v = zeta', i.e. f lies in the local
/// ring A of section 1.3.
bool regular_at_root(const QScalar& f, const RootOfUnityConfig& cfg);

/// Order of vanishing at v = zeta' (negative for poles; large sentinel for 0).
int valuation_at_root(const QScalar& f, const RootOfUnityConfig& cfg);
constexpr int kValuationOfZero = 1 << 20;

/// Ring homomorphism A -> Q(zeta'), v -> zeta'. Throws on a pole.
CycScalar specialize(const QScalar& f, const RootOfUnityConfig& cfg);

}  // namespace qroots
