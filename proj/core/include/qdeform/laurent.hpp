#pragma once

#include <map>
#include <string>

#include "qdeform/cyclotomic.hpp"

namespace qdeform {

/// Truncated Laurent series over Q(theta_ell): finitely many negative
/// exponents, every term of t-degree above working_order dropped.  The
/// working order is uniform across a computation; mixing orders is an error.
class LaurentScalar {
public:
    static constexpr int kDefaultWorkingOrder = 8;

    LaurentScalar() : ell_(0), order_(kDefaultWorkingOrder) {}

    static LaurentScalar zero(long ell, int working_order = kDefaultWorkingOrder);
    static LaurentScalar one(long ell, int working_order = kDefaultWorkingOrder);
    static LaurentScalar from_cyc(const CycScalar& c, int working_order = kDefaultWorkingOrder);
    /// c * t^k
    static LaurentScalar term(const CycScalar& c, int k, int working_order = kDefaultWorkingOrder);

    long ell() const { return ell_; }
    int working_order() const { return order_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    /// true when supported entirely in t-degree 0
    bool is_t_free() const;
    /// coefficient of t^k (zero scalar if absent)
    CycScalar coeff(int k) const;
    /// t^0 part as a CycScalar; throws if any other power is present
    CycScalar cyc_value() const;
    int lowest_exponent() const;  // throws on zero
    int highest_exponent() const; // throws on zero
    const std::map<int, CycScalar>& terms() const { return terms_; }

    LaurentScalar operator-() const;
    LaurentScalar& operator+=(const LaurentScalar& o);
    LaurentScalar& operator-=(const LaurentScalar& o);
    LaurentScalar& operator*=(const LaurentScalar& o);

    friend LaurentScalar operator+(LaurentScalar a, const LaurentScalar& b) { return a += b; }
    friend LaurentScalar operator-(LaurentScalar a, const LaurentScalar& b) { return a -= b; }
    friend LaurentScalar operator*(LaurentScalar a, const LaurentScalar& b) { return a *= b; }

    LaurentScalar scaled(const CycScalar& c) const;
    LaurentScalar shifted(int k) const;  // multiply by t^k

    /// Exact inverse of a single-term scalar; general series inverted up to
    /// the working order (lowest coefficient must be invertible).
    LaurentScalar inverse() const;
    LaurentScalar pow(long k) const;

    /// Same value re-truncated at a different working order.  Raising the
    /// order is only sound when the value is known exact below it.
    LaurentScalar at_order(int working_order) const;

    friend bool operator==(const LaurentScalar& a, const LaurentScalar& b);
    friend bool operator!=(const LaurentScalar& a, const LaurentScalar& b) { return !(a == b); }
    friend bool operator<(const LaurentScalar& a, const LaurentScalar& b);

    /// Canonical text: cyclotomic coefficients with explicit t-exponents,
    /// e.g. "3*t^-1 + (1 + th)*t^2".
    std::string to_string() const;

private:
    LaurentScalar(long ell, int order) : ell_(ell), order_(order) {}
    void check_compat(const LaurentScalar& o) const;
    void prune();

    long ell_;
    int order_;
    std::map<int, CycScalar> terms_;  // exponent -> nonzero coefficient
};

}  // namespace qdeform
