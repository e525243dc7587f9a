#include "qdeform/ncalg.hpp"

#include <sstream>
#include <stdexcept>

namespace qdeform {

std::string GenSymbol::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case GenKind::E: os << "e" << index; break;
        case GenKind::F: os << "f" << index; break;
        case GenKind::W: os << "w" << index; break;
        case GenKind::Wp: os << "wp" << index; break;
    }
    if (group_like() && power_sign < 0) os << "^-1";
    return os.str();
}

Word Word::concat(const Word& o) const {
    Word out;
    out.letters.reserve(letters.size() + o.letters.size());
    out.letters.insert(out.letters.end(), letters.begin(), letters.end());
    out.letters.insert(out.letters.end(), o.letters.begin(), o.letters.end());
    return out;
}

bool operator<(const Word& a, const Word& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    return std::lexicographical_compare(a.letters.begin(), a.letters.end(),
                                        b.letters.begin(), b.letters.end());
}

std::string Word::to_string() const {
    if (letters.empty()) return "1";
    std::ostringstream os;
    for (size_t i = 0; i < letters.size(); ++i) {
        if (i) os << "*";
        os << letters[i].to_string();
    }
    return os.str();
}

RootVector RootVector::alpha(int n, int i) {
    if (i < 1 || i > n - 1) throw std::out_of_range("simple root index out of range");
    std::vector<int> c(n - 1, 0);
    c[i - 1] = 1;
    return RootVector(std::move(c));
}

bool RootVector::is_zero() const {
    for (int x : comp)
        if (x) return false;
    return true;
}

bool RootVector::in_positive_cone() const {
    for (int x : comp)
        if (x < 0) return false;
    return true;
}

int RootVector::height() const {
    int h = 0;
    for (int x : comp) h += x;
    return h;
}

RootVector RootVector::operator+(const RootVector& o) const {
    if (comp.size() != o.comp.size()) throw std::invalid_argument("RootVector: rank mismatch");
    RootVector out = *this;
    for (size_t i = 0; i < comp.size(); ++i) out.comp[i] += o.comp[i];
    return out;
}

RootVector RootVector::operator-(const RootVector& o) const {
    if (comp.size() != o.comp.size()) throw std::invalid_argument("RootVector: rank mismatch");
    RootVector out = *this;
    for (size_t i = 0; i < comp.size(); ++i) out.comp[i] -= o.comp[i];
    return out;
}

RootVector RootVector::negated() const {
    RootVector out = *this;
    for (auto& x : out.comp) x = -x;
    return out;
}

std::string RootVector::to_string() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < comp.size(); ++i) {
        if (i) os << ",";
        os << comp[i];
    }
    os << ")";
    return os.str();
}

NCPoly NCPoly::zero(long ell, int working_order) { return NCPoly(ell, working_order); }

NCPoly NCPoly::unit(long ell, int working_order) {
    NCPoly p(ell, working_order);
    p.add_term(Word{}, LaurentScalar::one(ell, working_order));
    return p;
}

NCPoly NCPoly::monomial(const Word& w, const LaurentScalar& c) {
    NCPoly p(c.ell(), c.working_order());
    p.add_term(w, c);
    return p;
}

NCPoly NCPoly::generator(GenSymbol g, long ell, int working_order) {
    return monomial(Word({g}), LaurentScalar::one(ell, working_order));
}

void NCPoly::add_term(const Word& w, const LaurentScalar& c) {
    if (c.is_zero()) return;
    if (ell_ == 0) {
        ell_ = c.ell();
        order_ = c.working_order();
    }
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_.emplace(w, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

NCPoly NCPoly::operator-() const {
    NCPoly out(ell_, order_);
    for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
    return out;
}

NCPoly& NCPoly::operator+=(const NCPoly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
}

NCPoly operator*(const NCPoly& a, const NCPoly& b) {
    NCPoly out(a.ell_ ? a.ell_ : b.ell_, a.ell_ ? a.order_ : b.order_);
    for (const auto& [wa, ca] : a.terms_) {
        for (const auto& [wb, cb] : b.terms_) {
            out.add_term(wa.concat(wb), ca * cb);
        }
    }
    return out;
}

NCPoly NCPoly::scaled(const LaurentScalar& c) const {
    NCPoly out(ell_, order_);
    for (const auto& [w, v] : terms_) out.add_term(w, v * c);
    return out;
}

std::string NCPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::string cs = c.to_string();
        if (cs == "1" && !w.empty()) {
            os << w.to_string();
        } else {
            bool composite = cs.find(' ') != std::string::npos;
            os << (composite ? "(" + cs + ")" : cs);
            if (!w.empty()) os << "*" << w.to_string();
        }
    }
    return os.str();
}

RootVector word_degree(const Word& w, int n) {
    RootVector deg = RootVector::zero(n);
    for (const GenSymbol& g : w.letters) {
        if (g.index < 1 || g.index > n - 1) throw std::out_of_range("generator index out of range");
        if (g.kind == GenKind::E)
            deg.comp[g.index - 1] += 1;
        else if (g.kind == GenKind::F)
            deg.comp[g.index - 1] -= 1;
    }
    return deg;
}

NCPoly graded_component(const NCPoly& p, const RootVector& zeta, int n) {
    NCPoly out(p.ell(), p.working_order());
    for (const auto& [w, c] : p.terms()) {
        if (word_degree(w, n) == zeta) out.add_term(w, c);
    }
    return out;
}

}  // namespace qdeform
