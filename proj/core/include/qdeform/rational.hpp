#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qdeform {

/// Exact rational number with arbitrary-precision numerator and denominator.
/// Always stored in lowest terms with a positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long v) : num_(v), den_(1) {}
    Rational(const mpz_class& n, const mpz_class& d) : num_(n), den_(d) { normalize(); }
    Rational(long n, long d) : num_(n), den_(d) { normalize(); }

    static Rational from_string(const std::string& text);

    const mpz_class& num() const { return num_; }
    const mpz_class& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return sgn(num_); }

    Rational operator-() const { return Rational(raw{}, -num_, den_); }

    Rational& operator+=(const Rational& o) {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
        normalize();
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o) {
        num_ *= o.num_;
        den_ *= o.den_;
        normalize();
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
        num_ *= o.den_;
        den_ *= o.num_;
        normalize();
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    Rational inverse() const {
        if (num_ == 0) throw std::domain_error("Rational: inverse of zero");
        return Rational(raw{}, sgn(num_) >= 0 ? den_ : -den_, abs(num_));
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return cmp(a.num_ * b.den_, b.num_ * a.den_) < 0;
    }

    std::string to_string() const {
        std::string s = num_.get_str();
        if (den_ != 1) s += "/" + den_.get_str();
        return s;
    }

private:
    struct raw {};
    // skips normalization; caller guarantees lowest terms, positive denominator
    Rational(raw, mpz_class n, mpz_class d) : num_(std::move(n)), den_(std::move(d)) {}

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        mpz_class g = gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    mpz_class num_;
    mpz_class den_;
};

inline Rational Rational::from_string(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(mpz_class(text), mpz_class(1));
    return Rational(mpz_class(text.substr(0, slash)), mpz_class(text.substr(slash + 1)));
}

}  // namespace qdeform
