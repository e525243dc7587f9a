#include "qdeform/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qdeform {

namespace {

using Poly = std::vector<Rational>;  // ascending degree, no trailing zeros enforced by trim

void trim(Poly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

Poly poly_sub(Poly a, const Poly& b) {
    if (b.size() > a.size()) a.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

Poly poly_scale(Poly a, const Rational& c) {
    for (auto& x : a) x *= c;
    trim(a);
    return a;
}

// exact division with remainder over Q
void poly_divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.empty()) throw std::domain_error("polynomial division by zero");
    q.clear();
    r = a;
    trim(r);
    Rational lead_inv = b.back().inverse();
    while (degree(r) >= degree(b)) {
        int shift = degree(r) - degree(b);
        Rational c = r.back() * lead_inv;
        if (static_cast<int>(q.size()) < shift + 1) q.resize(shift + 1);
        q[shift] += c;
        Poly sub(shift + 1);
        sub[shift] = c;
        r = poly_sub(r, poly_mul(sub, b));
    }
    trim(q);
}

// extended gcd over Q[x]; returns (g, u, v) with u*a + v*b = g
void poly_xgcd(Poly a, Poly b, Poly& g, Poly& u, Poly& v) {
    Poly u0 = {Rational(1)}, v0 = {};
    Poly u1 = {}, v1 = {Rational(1)};
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly q, r;
        poly_divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
        Poly nu = poly_sub(u0, poly_mul(q, u1));
        Poly nv = poly_sub(v0, poly_mul(q, v1));
        u0 = std::move(u1);
        v0 = std::move(v1);
        u1 = std::move(nu);
        v1 = std::move(nv);
    }
    g = std::move(a);
    u = std::move(u0);
    v = std::move(v0);
}

std::map<long, Poly>& phi_cache() {
    static std::map<long, Poly> cache;
    return cache;
}
std::mutex& phi_mutex() {
    static std::mutex m;
    return m;
}

// Phi_ell by dividing x^ell - 1 by Phi_d for all proper divisors d.
const Poly& phi_of(long ell) {
    if (ell < 1) throw std::invalid_argument("cyclotomic order must be >= 1");
    std::lock_guard<std::mutex> lock(phi_mutex());
    auto& cache = phi_cache();
    auto it = cache.find(ell);
    if (it != cache.end()) return it->second;

    // ensure all proper divisors are present (computed in increasing order)
    for (long d = 1; d < ell; ++d) {
        if (ell % d != 0) continue;
        if (cache.count(d)) continue;
        // recursively build the divisor first; divisors of d are < ell
        Poly num(static_cast<size_t>(d) + 1);
        num[0] = Rational(-1);
        num[d] = Rational(1);
        for (long e = 1; e < d; ++e) {
            if (d % e != 0) continue;
            Poly q, r;
            poly_divmod(num, cache.at(e), q, r);
            if (!r.empty()) throw std::logic_error("cyclotomic division not exact");
            num = std::move(q);
        }
        cache.emplace(d, std::move(num));
    }

    Poly num(static_cast<size_t>(ell) + 1);
    num[0] = Rational(-1);
    num[ell] = Rational(1);
    for (long d = 1; d < ell; ++d) {
        if (ell % d != 0) continue;
        Poly q, r;
        poly_divmod(num, cache.at(d), q, r);
        if (!r.empty()) throw std::logic_error("cyclotomic division not exact");
        num = std::move(q);
    }
    auto [pos, inserted] = cache.emplace(ell, std::move(num));
    (void)inserted;
    return pos->second;
}

Poly reduce_mod_phi(Poly p, const Poly& phi) {
    Poly q, r;
    trim(p);
    poly_divmod(p, phi, q, r);
    return r;
}

}  // namespace

const std::vector<Rational>& cyclotomic_polynomial(long ell) { return phi_of(ell); }

int cyclotomic_degree(long ell) { return degree(phi_of(ell)); }

CycScalar CycScalar::zero(long ell) {
    (void)phi_of(ell);
    return CycScalar(ell, {});
}

CycScalar CycScalar::one(long ell) { return from_rational(ell, Rational(1)); }

CycScalar CycScalar::from_rational(long ell, const Rational& c) {
    (void)phi_of(ell);
    if (c.is_zero()) return CycScalar(ell, {});
    if (cyclotomic_degree(ell) == 0) throw std::logic_error("degenerate cyclotomic field");
    return CycScalar(ell, {c});
}

CycScalar CycScalar::from_coeffs(long ell, std::vector<Rational> coeffs) {
    Poly r = reduce_mod_phi(std::move(coeffs), phi_of(ell));
    return CycScalar(ell, std::move(r));
}

CycScalar CycScalar::theta_power(long ell, long k) {
    const Poly& phi = phi_of(ell);
    long km = ((k % ell) + ell) % ell;
    Poly p(static_cast<size_t>(km) + 1);
    p[km] = Rational(1);
    return CycScalar(ell, reduce_mod_phi(std::move(p), phi));
}

bool CycScalar::is_zero() const { return coeffs_.empty(); }

bool CycScalar::is_one() const {
    return coeffs_.size() == 1 && coeffs_[0].is_one();
}

bool CycScalar::is_rational() const { return coeffs_.size() <= 1; }

Rational CycScalar::rational_value() const {
    if (!is_rational()) throw std::domain_error("CycScalar: not a rational value");
    return coeffs_.empty() ? Rational(0) : coeffs_[0];
}

void CycScalar::check_order(const CycScalar& o) const {
    if (ell_ != o.ell_) throw std::invalid_argument("CycScalar: root-of-unity order mismatch");
}

CycScalar CycScalar::operator-() const {
    std::vector<Rational> c = coeffs_;
    for (auto& x : c) x = -x;
    return CycScalar(ell_, std::move(c));
}

CycScalar& CycScalar::operator+=(const CycScalar& o) {
    check_order(o);
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    return *this;
}

CycScalar& CycScalar::operator-=(const CycScalar& o) { return *this += -o; }

CycScalar& CycScalar::operator*=(const CycScalar& o) {
    check_order(o);
    coeffs_ = reduce_mod_phi(poly_mul(coeffs_, o.coeffs_), phi_of(ell_));
    return *this;
}

CycScalar CycScalar::inverse() const {
    if (is_zero()) throw std::domain_error("CycScalar: inverse of zero");
    const Poly& phi = phi_of(ell_);
    Poly g, u, v;
    poly_xgcd(coeffs_, phi, g, u, v);
    if (degree(g) != 0) throw std::logic_error("CycScalar: non-invertible representative");
    // u * this == g (a nonzero constant) mod Phi
    Poly inv = poly_scale(std::move(u), g[0].inverse());
    return CycScalar(ell_, reduce_mod_phi(std::move(inv), phi));
}

CycScalar CycScalar::pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    CycScalar acc = CycScalar::one(ell_);
    CycScalar base = *this;
    unsigned long e = static_cast<unsigned long>(k);
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

bool operator==(const CycScalar& a, const CycScalar& b) {
    return a.ell_ == b.ell_ && a.coeffs_ == b.coeffs_;
}

bool operator<(const CycScalar& a, const CycScalar& b) {
    if (a.ell_ != b.ell_) return a.ell_ < b.ell_;
    if (a.coeffs_.size() != b.coeffs_.size()) return a.coeffs_.size() < b.coeffs_.size();
    for (size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] != b.coeffs_[i]) return a.coeffs_[i] < b.coeffs_[i];
    }
    return false;
}

std::string CycScalar::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        const Rational& c = coeffs_[i];
        if (c.is_zero()) continue;
        Rational mag = c.sign() < 0 ? -c : c;
        if (first) {
            if (c.sign() < 0) os << "-";
            first = false;
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        bool unit = mag.is_one();
        if (i == 0) {
            os << mag.to_string();
        } else {
            if (!unit) os << mag.to_string() << "*";
            os << "th";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

long theta_power_order(long ell, long k) {
    long km = ((k % ell) + ell) % ell;
    return ell / std::gcd(ell, km == 0 ? ell : km);
}

}  // namespace qdeform
