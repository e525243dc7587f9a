#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdeform/rational.hpp"

namespace qdeform {

/// Coefficient vector of the ell-th cyclotomic polynomial Phi_ell (monic,
/// ascending degree, integer coefficients stored as Rational).
const std::vector<Rational>& cyclotomic_polynomial(long ell);

/// Euler phi(ell) = deg Phi_ell.
int cyclotomic_degree(long ell);

/// An element of Q(theta_ell) = Q[x]/Phi_ell(x), theta_ell a primitive
/// ell-th root of unity.  The representative is always fully reduced mod
/// Phi_ell, so equality is coefficient-wise.  All arithmetic is exact.
class CycScalar {
public:
    CycScalar() : ell_(0) {}  // unusable sentinel; real values carry ell >= 1

    static CycScalar zero(long ell);
    static CycScalar one(long ell);
    static CycScalar from_rational(long ell, const Rational& c);
    /// theta^k reduced mod Phi_ell; k may be negative.
    static CycScalar theta_power(long ell, long k);
    /// Element with the given coefficient vector (length <= phi(ell) allowed).
    static CycScalar from_coeffs(long ell, std::vector<Rational> coeffs);

    long order() const { return ell_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const;
    /// Constant term when is_rational(), throws otherwise.
    Rational rational_value() const;

    CycScalar operator-() const;
    CycScalar& operator+=(const CycScalar& o);
    CycScalar& operator-=(const CycScalar& o);
    CycScalar& operator*=(const CycScalar& o);

    friend CycScalar operator+(CycScalar a, const CycScalar& b) { return a += b; }
    friend CycScalar operator-(CycScalar a, const CycScalar& b) { return a -= b; }
    friend CycScalar operator*(CycScalar a, const CycScalar& b) { return a *= b; }

    CycScalar inverse() const;
    CycScalar pow(long k) const;

    friend bool operator==(const CycScalar& a, const CycScalar& b);
    friend bool operator!=(const CycScalar& a, const CycScalar& b) { return !(a == b); }
    friend bool operator<(const CycScalar& a, const CycScalar& b);

    /// Canonical text form "c0 + c1*th + c2*th^2", exact fractions, zero
    /// coefficients skipped ("0" for the zero element).
    std::string to_string() const;

private:
    CycScalar(long ell, std::vector<Rational> c) : ell_(ell), coeffs_(std::move(c)) {}
    void check_order(const CycScalar& o) const;

    long ell_;
    std::vector<Rational> coeffs_;  // length phi(ell), reduced mod Phi_ell
};

/// Multiplicative order of theta^k in Q(theta_ell): ell / gcd(ell, k).
long theta_power_order(long ell, long k);

}  // namespace qdeform
