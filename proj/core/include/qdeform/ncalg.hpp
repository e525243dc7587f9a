#pragma once

#include <map>
#include <string>
#include <vector>

#include "qdeform/laurent.hpp"

namespace qdeform {

enum class GenKind { E, F, W, Wp };

/// One generator letter: e_i, f_i, w_i^{+-1} or wp_i^{+-1}.  The power sign
/// is only meaningful for the group-like kinds.
struct GenSymbol {
    GenKind kind;
    int index;       // 1..n-1
    int power_sign;  // +1 or -1, group-like kinds only

    static GenSymbol e(int i) { return {GenKind::E, i, 1}; }
    static GenSymbol f(int i) { return {GenKind::F, i, 1}; }
    static GenSymbol w(int i, int sign = 1) { return {GenKind::W, i, sign}; }
    static GenSymbol wp(int i, int sign = 1) { return {GenKind::Wp, i, sign}; }

    bool group_like() const { return kind == GenKind::W || kind == GenKind::Wp; }

    friend bool operator==(const GenSymbol& a, const GenSymbol& b) {
        return a.kind == b.kind && a.index == b.index &&
               (!a.group_like() || a.power_sign == b.power_sign);
    }
    friend bool operator<(const GenSymbol& a, const GenSymbol& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.index != b.index) return a.index < b.index;
        int sa = a.group_like() ? a.power_sign : 1;
        int sb = b.group_like() ? b.power_sign : 1;
        return sa < sb;
    }

    std::string to_string() const;
};

/// Free word over the generator alphabet.
struct Word {
    std::vector<GenSymbol> letters;

    Word() = default;
    explicit Word(std::vector<GenSymbol> ls) : letters(std::move(ls)) {}

    size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }
    Word concat(const Word& o) const;

    friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
    friend bool operator<(const Word& a, const Word& b);

    std::string to_string() const;  // "e1*f1*w2^-1", "1" for the empty word
};

/// Element of the root lattice Q in simple-root coordinates.
struct RootVector {
    std::vector<int> comp;  // length n-1

    RootVector() = default;
    explicit RootVector(std::vector<int> c) : comp(std::move(c)) {}
    static RootVector zero(int n) { return RootVector(std::vector<int>(n - 1, 0)); }
    static RootVector alpha(int n, int i);  // simple root alpha_i

    int rank() const { return static_cast<int>(comp.size()); }
    bool is_zero() const;
    bool in_positive_cone() const;  // all components >= 0
    int height() const;             // component sum

    RootVector operator+(const RootVector& o) const;
    RootVector operator-(const RootVector& o) const;
    RootVector negated() const;

    friend bool operator==(const RootVector& a, const RootVector& b) { return a.comp == b.comp; }
    friend bool operator!=(const RootVector& a, const RootVector& b) { return !(a == b); }
    friend bool operator<(const RootVector& a, const RootVector& b) { return a.comp < b.comp; }

    std::string to_string() const;  // "(1,0,2)"
};

/// Free noncommutative polynomial: finite sum of words with Laurent
/// coefficients, no stored zeros.  Term maps iterate in a fixed total order
/// so output is reproducible.
class NCPoly {
public:
    NCPoly() : ell_(0), order_(LaurentScalar::kDefaultWorkingOrder) {}
    NCPoly(long ell, int working_order) : ell_(ell), order_(working_order) {}

    static NCPoly zero(long ell, int working_order = LaurentScalar::kDefaultWorkingOrder);
    static NCPoly unit(long ell, int working_order = LaurentScalar::kDefaultWorkingOrder);
    static NCPoly monomial(const Word& w, const LaurentScalar& c);
    static NCPoly generator(GenSymbol g, long ell,
                            int working_order = LaurentScalar::kDefaultWorkingOrder);

    long ell() const { return ell_; }
    int working_order() const { return order_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Word, LaurentScalar>& terms() const { return terms_; }

    void add_term(const Word& w, const LaurentScalar& c);

    NCPoly operator-() const;
    NCPoly& operator+=(const NCPoly& o);
    NCPoly& operator-=(const NCPoly& o);
    friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
    friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
    friend NCPoly operator*(const NCPoly& a, const NCPoly& b);

    NCPoly scaled(const LaurentScalar& c) const;

    friend bool operator==(const NCPoly& a, const NCPoly& b) { return a.terms_ == b.terms_; }

    std::string to_string() const;

private:
    long ell_;
    int order_;
    std::map<Word, LaurentScalar> terms_;
};

/// Degree of a word in the root lattice: deg(e_i) = alpha_i,
/// deg(f_i) = -alpha_i, group-like letters contribute zero.
RootVector word_degree(const Word& w, int n);

/// Restriction of p to the words of degree zeta.
NCPoly graded_component(const NCPoly& p, const RootVector& zeta, int n);

}  // namespace qdeform
