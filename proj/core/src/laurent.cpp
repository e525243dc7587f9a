#include "qdeform/laurent.hpp"

#include <sstream>
#include <stdexcept>

namespace qdeform {

LaurentScalar LaurentScalar::zero(long ell, int working_order) {
    (void)cyclotomic_degree(ell);
    return LaurentScalar(ell, working_order);
}

LaurentScalar LaurentScalar::one(long ell, int working_order) {
    return from_cyc(CycScalar::one(ell), working_order);
}

LaurentScalar LaurentScalar::from_cyc(const CycScalar& c, int working_order) {
    return term(c, 0, working_order);
}

LaurentScalar LaurentScalar::term(const CycScalar& c, int k, int working_order) {
    LaurentScalar out(c.order(), working_order);
    if (!c.is_zero() && k <= working_order) out.terms_.emplace(k, c);
    return out;
}

bool LaurentScalar::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second.is_one();
}

bool LaurentScalar::is_t_free() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

CycScalar LaurentScalar::coeff(int k) const {
    auto it = terms_.find(k);
    if (it == terms_.end()) return CycScalar::zero(ell_);
    return it->second;
}

CycScalar LaurentScalar::cyc_value() const {
    if (!is_t_free()) throw std::domain_error("LaurentScalar: value has nonzero t-degree");
    return terms_.empty() ? CycScalar::zero(ell_) : terms_.begin()->second;
}

int LaurentScalar::lowest_exponent() const {
    if (terms_.empty()) throw std::domain_error("LaurentScalar: zero has no lowest exponent");
    return terms_.begin()->first;
}

int LaurentScalar::highest_exponent() const {
    if (terms_.empty()) throw std::domain_error("LaurentScalar: zero has no highest exponent");
    return terms_.rbegin()->first;
}

void LaurentScalar::check_compat(const LaurentScalar& o) const {
    if (ell_ != o.ell_) throw std::invalid_argument("LaurentScalar: root-of-unity order mismatch");
    if (order_ != o.order_) throw std::invalid_argument("LaurentScalar: working_order mismatch");
}

void LaurentScalar::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second.is_zero() || it->first > order_)
            it = terms_.erase(it);
        else
            ++it;
    }
}

LaurentScalar LaurentScalar::operator-() const {
    LaurentScalar out(ell_, order_);
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
    return out;
}

LaurentScalar& LaurentScalar::operator+=(const LaurentScalar& o) {
    check_compat(o);
    for (const auto& [k, c] : o.terms_) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

LaurentScalar& LaurentScalar::operator-=(const LaurentScalar& o) { return *this += -o; }

LaurentScalar& LaurentScalar::operator*=(const LaurentScalar& o) {
    check_compat(o);
    LaurentScalar out(ell_, order_);
    for (const auto& [ka, ca] : terms_) {
        for (const auto& [kb, cb] : o.terms_) {
            int k = ka + kb;
            if (k > order_) continue;
            CycScalar prod = ca * cb;
            if (prod.is_zero()) continue;
            auto it = out.terms_.find(k);
            if (it == out.terms_.end()) {
                out.terms_.emplace(k, std::move(prod));
            } else {
                it->second += prod;
                if (it->second.is_zero()) out.terms_.erase(it);
            }
        }
    }
    *this = std::move(out);
    return *this;
}

LaurentScalar LaurentScalar::scaled(const CycScalar& c) const {
    LaurentScalar out(ell_, order_);
    if (c.is_zero()) return out;
    for (const auto& [k, v] : terms_) {
        CycScalar prod = v * c;
        if (!prod.is_zero()) out.terms_.emplace(k, std::move(prod));
    }
    return out;
}

LaurentScalar LaurentScalar::shifted(int k) const {
    LaurentScalar out(ell_, order_);
    for (const auto& [e, v] : terms_) {
        if (e + k <= order_) out.terms_.emplace(e + k, v);
    }
    return out;
}

LaurentScalar LaurentScalar::inverse() const {
    if (terms_.empty()) throw std::domain_error("LaurentScalar: inverse of zero");
    int low = lowest_exponent();
    if (terms_.size() == 1) {
        return term(terms_.begin()->second.inverse(), -low, order_);
    }
    // factor c*t^low * (1 + u), invert the unit part as a geometric series
    CycScalar lead = terms_.begin()->second;
    CycScalar lead_inv = lead.inverse();
    LaurentScalar u(ell_, order_);
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
        int e = it->first - low;
        if (e <= order_) u.terms_.emplace(e, it->second * lead_inv);
    }
    LaurentScalar acc = one(ell_, order_);
    LaurentScalar pw = one(ell_, order_);
    for (int i = 1; i <= order_ - (-low); ++i) {
        pw *= u;
        if (pw.is_zero()) break;
        if (i % 2 == 1)
            acc -= pw;
        else
            acc += pw;
    }
    return acc.scaled(lead_inv).shifted(-low);
}

LaurentScalar LaurentScalar::pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    LaurentScalar acc = one(ell_, order_);
    LaurentScalar base = *this;
    unsigned long e = static_cast<unsigned long>(k);
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

LaurentScalar LaurentScalar::at_order(int working_order) const {
    LaurentScalar out(ell_, working_order);
    for (const auto& [k, c] : terms_) {
        if (k <= working_order) out.terms_.emplace(k, c);
    }
    return out;
}

bool operator==(const LaurentScalar& a, const LaurentScalar& b) {
    return a.ell_ == b.ell_ && a.terms_ == b.terms_;
}

bool operator<(const LaurentScalar& a, const LaurentScalar& b) {
    if (a.ell_ != b.ell_) return a.ell_ < b.ell_;
    return std::lexicographical_compare(
        a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
        [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return x.second < y.second;
        });
}

std::string LaurentScalar::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        std::string cs = c.to_string();
        bool composite = cs.find(' ') != std::string::npos;
        if (!first) os << " + ";
        first = false;
        if (k == 0) {
            os << (composite ? "(" + cs + ")" : cs);
            continue;
        }
        if (c.is_one()) {
            os << "t";
        } else {
            os << (composite ? "(" + cs + ")" : cs) << "*t";
        }
        if (k != 1) os << "^" << k;
    }
    return os.str();
}

}  // namespace qdeform
