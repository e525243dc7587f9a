#include "qdeform/qgroup.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <sstream>

namespace qdeform {

// ---------------------------------------------------------------- params

void QGroupParams::validate() const {
    if (n < 2) throw std::invalid_argument("QGroupParams: n must be >= 2");
    if (ell < 2) throw std::invalid_argument("QGroupParams: ell must be >= 2");
    if (y < 0 || z < 0) throw std::invalid_argument("QGroupParams: y, z must be nonnegative");
    if (((y - z) % ell + ell) % ell == 0)
        throw std::invalid_argument("QGroupParams: r and s must differ (y != z mod ell)");
    long oy = theta_power_order(ell, y);
    long oz = theta_power_order(ell, z);
    if (std::lcm(oy, oz) != ell)
        throw std::invalid_argument("QGroupParams: ell must be the lcm of the orders of r and s");
    if (height_bound < 0) throw std::invalid_argument("QGroupParams: negative height bound");
}

std::string QGroupParams::to_string() const {
    std::ostringstream os;
    os << "U_{theta^" << y << ",theta^" << z << "}(sl_" << n << "), ell=" << ell
       << (restricted ? ", restricted" : "");
    return os.str();
}

// ---------------------------------------------------------------- PBWMonomial

bool PBWMonomial::is_unit() const {
    if (!f_exp.empty() || !e_exp.empty()) return false;
    for (int k : w_exp)
        if (k) return false;
    for (int k : wp_exp)
        if (k) return false;
    return true;
}

bool PBWMonomial::group_only() const { return f_exp.empty() && e_exp.empty(); }

RootVector PBWMonomial::e_degree(int n) const {
    RootVector deg = RootVector::zero(n);
    for (const auto& [root, a] : e_exp) {
        for (int k = root.second; k <= root.first; ++k) deg.comp[k - 1] += a;
    }
    return deg;
}

RootVector PBWMonomial::f_degree(int n) const {
    RootVector deg = RootVector::zero(n);
    for (const auto& [root, a] : f_exp) {
        for (int k = root.second; k <= root.first; ++k) deg.comp[k - 1] += a;
    }
    return deg;
}

int PBWMonomial::height() const {
    int h = 0;
    for (const auto& [root, a] : e_exp) h += a * (root.first - root.second + 1);
    for (const auto& [root, a] : f_exp) h += a * (root.first - root.second + 1);
    return h;
}

bool operator<(const PBWMonomial& a, const PBWMonomial& b) {
    if (a.f_exp != b.f_exp) return a.f_exp < b.f_exp;
    if (a.w_exp != b.w_exp) return a.w_exp < b.w_exp;
    if (a.wp_exp != b.wp_exp) return a.wp_exp < b.wp_exp;
    return a.e_exp < b.e_exp;
}

namespace {

void print_root_factors(std::ostringstream& os, bool& first, const char* small_name,
                        const char* big_name, const std::map<RootPair, int>& exps) {
    for (const auto& [root, a] : exps) {
        if (a == 0) continue;
        if (!first) os << "*";
        first = false;
        if (root.first == root.second)
            os << small_name << root.second;
        else
            os << big_name << "(" << root.first << "," << root.second << ")";
        if (a != 1) os << "^" << a;
    }
}

void print_group_factors(std::ostringstream& os, bool& first, const char* name,
                         const std::vector<int>& exps) {
    for (size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] == 0) continue;
        if (!first) os << "*";
        first = false;
        os << name << (i + 1);
        if (exps[i] != 1) os << "^" << exps[i];
    }
}

}  // namespace

std::string PBWMonomial::to_string() const {
    if (is_unit()) return "1";
    std::ostringstream os;
    bool first = true;
    print_root_factors(os, first, "f", "F", f_exp);
    print_group_factors(os, first, "w", w_exp);
    print_group_factors(os, first, "wp", wp_exp);
    print_root_factors(os, first, "e", "E", e_exp);
    return os.str();
}

// ---------------------------------------------------------------- AlgebraElement

void AlgebraElement::add_term(const PBWMonomial& m, const LaurentScalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

AlgebraElement AlgebraElement::operator-() const {
    AlgebraElement out(ctx_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
    if (!ctx_) ctx_ = o.ctx_;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
    if (!ctx_) ctx_ = o.ctx_;
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

AlgebraElement AlgebraElement::scaled(const LaurentScalar& c) const {
    AlgebraElement out(ctx_);
    for (const auto& [m, v] : terms_) out.add_term(m, v * c);
    return out;
}

namespace {

// true when the coefficient is a single term whose leading rational is
// negative, so the sign can be pulled in front of the printed term
bool simple_negative(const LaurentScalar& c) {
    if (c.terms().size() != 1) return false;
    const CycScalar& v = c.terms().begin()->second;
    for (const auto& x : v.coeffs()) {
        if (x.is_zero()) continue;
        return x.sign() < 0;
    }
    return false;
}

void print_scaled_term(std::ostringstream& os, bool first, const LaurentScalar& c,
                       const std::string& mono) {
    LaurentScalar cc = c;
    std::string joiner = first ? "" : " + ";
    if (simple_negative(c)) {
        joiner = first ? "-" : " - ";
        cc = -c;
    }
    os << joiner;
    std::string cs = cc.to_string();
    bool unit_mono = mono == "1";
    if (cs == "1" && !unit_mono) {
        os << mono;
        return;
    }
    bool composite = cs.find(' ') != std::string::npos;
    os << (composite ? "(" + cs + ")" : cs);
    if (!unit_mono) os << "*" << mono;
}

}  // namespace

std::string AlgebraElement::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        print_scaled_term(os, first, c, m.to_string());
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------- TensorElement

void TensorElement::add_term(std::vector<PBWMonomial> slots, const LaurentScalar& c) {
    if (static_cast<int>(slots.size()) != arity_)
        throw std::invalid_argument("TensorElement: arity mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(slots);
    if (it == terms_.end()) {
        terms_.emplace(std::move(slots), c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

TensorElement TensorElement::operator-() const {
    TensorElement out(arity_, ctx_);
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
    return out;
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
    if (arity_ != o.arity_) throw std::invalid_argument("TensorElement: arity mismatch");
    if (!ctx_) ctx_ = o.ctx_;
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
    if (arity_ != o.arity_) throw std::invalid_argument("TensorElement: arity mismatch");
    if (!ctx_) ctx_ = o.ctx_;
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
}

TensorElement TensorElement::scaled(const LaurentScalar& c) const {
    TensorElement out(arity_, ctx_);
    for (const auto& [k, v] : terms_) out.add_term(k, v * c);
    return out;
}

std::string TensorElement::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [slots, c] : terms_) {
        std::ostringstream mono;
        for (size_t i = 0; i < slots.size(); ++i) {
            if (i) mono << " (x) ";
            mono << slots[i].to_string();
        }
        print_scaled_term(os, first, c, "[" + mono.str() + "]");
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------- QGroup basics

QGroup::QGroup(QGroupParams params, int working_order)
    : params_(params), working_order_(working_order) {
    if (params_.height_bound == 0)
        params_.height_bound = QGroupParams::default_height_bound(params_.n, params_.ell);
    params_.validate();
    r_ = CycScalar::theta_power(params_.ell, params_.y);
    s_ = CycScalar::theta_power(params_.ell, params_.z);
    r_minus_s_inv_ = (r_ - s_).inverse();
}

std::shared_ptr<QGroup> QGroup::make(QGroupParams params, int working_order) {
    return std::shared_ptr<QGroup>(new QGroup(params, working_order));
}

int QGroup::eps_alpha(int a, int j) { return (a == j ? 1 : 0) - (a == j + 1 ? 1 : 0); }

CycScalar QGroup::rho(int i, int j) const {
    return r_.pow(eps_alpha(i, j)) * s_.pow(eps_alpha(i + 1, j));
}

CycScalar QGroup::rho_p(int i, int j) const {
    return r_.pow(eps_alpha(i + 1, j)) * s_.pow(eps_alpha(i, j));
}

AlgebraElement QGroup::zero_element() const { return AlgebraElement(shared_from_this()); }

AlgebraElement QGroup::one_element() const { return from_monomial(PBWMonomial::unit(params_.n)); }

AlgebraElement QGroup::from_monomial(const PBWMonomial& m, const LaurentScalar& c) const {
    AlgebraElement out(shared_from_this());
    PBWMonomial mm = m;
    if (static_cast<int>(mm.w_exp.size()) != params_.n - 1 ||
        static_cast<int>(mm.wp_exp.size()) != params_.n - 1)
        throw std::invalid_argument("PBWMonomial: wrong group rank for these parameters");
    if (params_.restricted) {
        for (auto& k : mm.w_exp)
            k = static_cast<int>(((k % params_.ell) + params_.ell) % params_.ell);
        for (auto& k : mm.wp_exp)
            k = static_cast<int>(((k % params_.ell) + params_.ell) % params_.ell);
        for (const auto& [root, a] : mm.e_exp)
            if (a >= params_.ell) return out;
        for (const auto& [root, a] : mm.f_exp)
            if (a >= params_.ell) return out;
    }
    out.add_term(mm, c);
    return out;
}

AlgebraElement QGroup::from_monomial(const PBWMonomial& m) const {
    return from_monomial(m, laurent_one());
}

PBWMonomial QGroup::group_monomial(const std::vector<int>& a, const std::vector<int>& b) const {
    if (static_cast<int>(a.size()) != params_.n - 1 || static_cast<int>(b.size()) != params_.n - 1)
        throw std::invalid_argument("group_monomial: wrong rank");
    PBWMonomial m = PBWMonomial::unit(params_.n);
    m.w_exp = a;
    m.wp_exp = b;
    return m;
}

// g x = chi * x g for a group-like letter g and an e/f letter x
CycScalar QGroup::group_move_scalar(const GenSymbol& g, const GenSymbol& x) const {
    CycScalar base = (g.kind == GenKind::W) ? rho(g.index, x.index) : rho_p(g.index, x.index);
    long e = g.power_sign;
    if (x.kind == GenKind::F) e = -e;
    return base.pow(e);
}

// ---------------------------------------------------------------- slice tables

namespace {

// distinct words (letter-index sequences) of the given multidegree, in
// ascending lex order
void enumerate_words_rec(std::vector<int>& counts, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
    bool done = true;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            done = false;
            counts[i]--;
            cur.push_back(static_cast<int>(i + 1));
            enumerate_words_rec(counts, cur, out);
            cur.pop_back();
            counts[i]++;
        }
    }
    if (done) out.push_back(cur);
}

std::vector<std::vector<int>> enumerate_words(const RootVector& zeta) {
    std::vector<int> counts = zeta.comp;
    std::vector<int> cur;
    std::vector<std::vector<int>> out;
    enumerate_words_rec(counts, cur, out);
    return out;
}

// maximal descending-run parse; the word is the leading word of a PBW
// monomial exactly when the run sequence is lex non-decreasing
bool is_pbw_word(const std::vector<int>& w) {
    std::vector<RootPair> runs;
    size_t k = 0;
    while (k < w.size()) {
        int i = w[k];
        int j = i;
        ++k;
        while (k < w.size() && w[k] == j - 1) {
            j = w[k];
            ++k;
        }
        runs.emplace_back(i, j);
    }
    for (size_t t = 1; t < runs.size(); ++t) {
        if (runs[t] < runs[t - 1]) return false;
    }
    return true;
}

// all multidegrees mu with 0 <= mu <= delta componentwise
void enumerate_subdegrees(const RootVector& delta, std::vector<RootVector>& out) {
    size_t rank = delta.comp.size();
    RootVector mu(std::vector<int>(rank, 0));
    while (true) {
        out.push_back(mu);
        size_t k = 0;
        while (k < rank) {
            if (mu.comp[k] < delta.comp[k]) {
                mu.comp[k]++;
                break;
            }
            mu.comp[k] = 0;
            ++k;
        }
        if (k == rank) break;
    }
}

std::vector<RootPair> positive_roots(int n) {
    std::vector<RootPair> roots;
    for (int i = 1; i <= n - 1; ++i)
        for (int j = 1; j <= i; ++j) roots.emplace_back(i, j);
    std::sort(roots.begin(), roots.end());
    return roots;
}

void enumerate_monos_rec(const std::vector<RootPair>& roots, size_t pos, RootVector& rest,
                         long cap, std::map<RootPair, int>& cur,
                         std::vector<std::map<RootPair, int>>& out) {
    if (pos == roots.size()) {
        if (rest.is_zero()) out.push_back(cur);
        return;
    }
    const auto [i, j] = roots[pos];
    long maxa = cap;
    for (int k = j; k <= i; ++k) maxa = std::min<long>(maxa, rest.comp[k - 1]);
    for (long a = 0; a <= maxa; ++a) {
        if (a > 0) {
            cur[roots[pos]] = static_cast<int>(a);
            for (int k = j; k <= i; ++k) rest.comp[k - 1]--;
        }
        enumerate_monos_rec(roots, pos + 1, rest, cap, cur, out);
    }
    auto it = cur.find(roots[pos]);
    if (it != cur.end()) {
        for (int k = j; k <= i; ++k) rest.comp[k - 1] += it->second;
        cur.erase(it);
    }
}

std::vector<std::map<RootPair, int>> enumerate_monos(int n, const RootVector& zeta, long cap) {
    std::vector<std::map<RootPair, int>> out;
    if (!zeta.in_positive_cone()) return out;
    RootVector rest = zeta;
    std::map<RootPair, int> cur;
    enumerate_monos_rec(positive_roots(n), 0, rest, cap, cur, out);
    return out;
}

}  // namespace

struct QGroup::SliceTable {
    std::vector<std::vector<int>> words;
    std::map<std::vector<int>, int> word_col;
    std::unique_ptr<RowSpan> span;
    std::vector<int> free_cols;
    std::vector<std::map<RootPair, int>> monos;  // untruncated, lex order
    std::optional<CycMatrix> minv;               // residue coords -> monomial coords
    std::map<int, std::vector<std::pair<std::map<RootPair, int>, CycScalar>>> memo;
};

// builds (or returns) the reduction table of one graded slice; the caller
// must hold slice_mutex_
const QGroup::SliceTable& QGroup::slice(GenKind side, const RootVector& zeta) const {
    auto key = std::make_pair(side == GenKind::E ? 0 : 1, zeta);
    auto it = slices_.find(key);
    if (it != slices_.end()) return *it->second;

    if (zeta.height() > params_.height_bound)
        throw height_bound_error("degree height " + std::to_string(zeta.height()) +
                                 " exceeds height_bound " +
                                 std::to_string(params_.height_bound));

    auto table = std::make_unique<SliceTable>();
    table->words = enumerate_words(zeta);
    int ncols = static_cast<int>(table->words.size());
    for (int c = 0; c < ncols; ++c) table->word_col.emplace(table->words[c], c);

    std::vector<int> pivot_order;
    for (int c = 0; c < ncols; ++c)
        if (!is_pbw_word(table->words[c])) pivot_order.push_back(c);
    for (int c = 0; c < ncols; ++c)
        if (is_pbw_word(table->words[c])) pivot_order.push_back(c);
    table->span = std::make_unique<RowSpan>(ncols, params_.ell, pivot_order);

    // the degree-zeta slice of the two-sided Serre ideal: u * rel * v
    struct Rel {
        std::vector<std::pair<std::vector<int>, CycScalar>> terms;
        RootVector degree;
    };
    std::vector<Rel> rels;
    const int rank = params_.n - 1;
    CycScalar quad_mid = (side == GenKind::E) ? (r_ + s_) : (r_.inverse() + s_.inverse());
    CycScalar quad_last = (side == GenKind::E) ? (r_ * s_) : (r_ * s_).inverse();
    CycScalar one = CycScalar::one(params_.ell);
    for (int i = 1; i <= rank; ++i) {
        for (int j = i + 2; j <= rank; ++j) {
            Rel rel;
            rel.terms = {{{i, j}, one}, {{j, i}, -one}};
            rel.degree = RootVector::alpha(params_.n, i) + RootVector::alpha(params_.n, j);
            rels.push_back(std::move(rel));
        }
    }
    for (int i = 1; i + 1 <= rank; ++i) {
        RootVector ai = RootVector::alpha(params_.n, i);
        RootVector a1 = RootVector::alpha(params_.n, i + 1);
        Rel a;
        a.terms = {{{i, i, i + 1}, one}, {{i, i + 1, i}, -quad_mid}, {{i + 1, i, i}, quad_last}};
        a.degree = ai + ai + a1;
        rels.push_back(std::move(a));
        Rel b;
        b.terms = {{{i, i + 1, i + 1}, one},
                   {{i + 1, i, i + 1}, -quad_mid},
                   {{i + 1, i + 1, i}, quad_last}};
        b.degree = ai + a1 + a1;
        rels.push_back(std::move(b));
    }

    for (const Rel& rel : rels) {
        RootVector rest = zeta - rel.degree;
        if (!rest.in_positive_cone()) continue;
        std::vector<RootVector> mus;
        enumerate_subdegrees(rest, mus);
        for (const RootVector& mu : mus) {
            RootVector nu = rest - mu;
            for (const auto& u : enumerate_words(mu)) {
                for (const auto& v : enumerate_words(nu)) {
                    std::vector<CycScalar> row(ncols, CycScalar::zero(params_.ell));
                    for (const auto& [rw, rc] : rel.terms) {
                        std::vector<int> word = u;
                        word.insert(word.end(), rw.begin(), rw.end());
                        word.insert(word.end(), v.begin(), v.end());
                        row[table->word_col.at(word)] += rc;
                    }
                    table->span->insert(std::move(row));
                }
            }
        }
    }

    table->free_cols = table->span->free_columns();
    table->monos = enumerate_monos(params_.n, zeta, std::max<long>(zeta.height(), 1));

    auto [pos, inserted] = slices_.emplace(key, std::move(table));
    (void)inserted;
    return *pos->second;
}

std::vector<std::pair<std::map<RootPair, int>, CycScalar>> QGroup::reduce_word(
    GenKind side, const std::vector<int>& letters) const {
    if (letters.empty()) {
        return {{std::map<RootPair, int>{}, CycScalar::one(params_.ell)}};
    }
    RootVector zeta = RootVector::zero(params_.n);
    for (int i : letters) zeta.comp[i - 1]++;

    std::lock_guard<std::mutex> lock(slice_mutex_);
    auto& tbl = const_cast<SliceTable&>(slice(side, zeta));
    int col = tbl.word_col.at(letters);
    auto hit = tbl.memo.find(col);
    if (hit != tbl.memo.end()) return hit->second;

    int q = static_cast<int>(tbl.monos.size());
    if (static_cast<int>(tbl.free_cols.size()) != q)
        throw std::logic_error("PBW dimension check failed in degree " + zeta.to_string());

    if (!tbl.minv && q > 0) {
        CycMatrix rt(q, q, params_.ell);
        for (int mcol = 0; mcol < q; ++mcol) {
            PBWMonomial mono = PBWMonomial::unit(params_.n);
            if (side == GenKind::E)
                mono.e_exp = tbl.monos[mcol];
            else
                mono.f_exp = tbl.monos[mcol];
            NCPoly free = expand(mono);
            std::vector<CycScalar> vec(tbl.words.size(), CycScalar::zero(params_.ell));
            for (const auto& [w, c] : free.terms()) {
                std::vector<int> ls;
                ls.reserve(w.letters.size());
                for (const auto& g : w.letters) ls.push_back(g.index);
                vec[tbl.word_col.at(ls)] += c.cyc_value();
            }
            std::vector<CycScalar> res = tbl.span->residue(std::move(vec));
            for (int rrow = 0; rrow < q; ++rrow) rt.at(rrow, mcol) = res[tbl.free_cols[rrow]];
        }
        auto inv = rt.inverse();
        if (!inv)
            throw std::logic_error("PBW monomial residues are dependent in degree " +
                                   zeta.to_string());
        tbl.minv = std::move(*inv);
    }

    std::vector<CycScalar> unit(tbl.words.size(), CycScalar::zero(params_.ell));
    unit[col] = CycScalar::one(params_.ell);
    std::vector<CycScalar> res = tbl.span->residue(std::move(unit));

    std::vector<std::pair<std::map<RootPair, int>, CycScalar>> out;
    for (int m = 0; m < q; ++m) {
        CycScalar x = CycScalar::zero(params_.ell);
        for (int c = 0; c < q; ++c) {
            const CycScalar& entry = tbl.minv->at(m, c);
            if (entry.is_zero()) continue;
            x += entry * res[tbl.free_cols[c]];
        }
        if (!x.is_zero()) out.emplace_back(tbl.monos[m], x);
    }
    tbl.memo.emplace(col, out);
    return out;
}

bool QGroup::pbw_dimension_check(GenKind side, const RootVector& zeta) const {
    std::lock_guard<std::mutex> lock(slice_mutex_);
    const SliceTable& tbl = slice(side, zeta);
    return tbl.free_cols.size() == tbl.monos.size();
}

// ---------------------------------------------------------------- PBW enumeration

std::vector<PBWMonomial> QGroup::pbw_monomials_unbounded(GenKind side,
                                                         const RootVector& zeta) const {
    std::vector<PBWMonomial> out;
    for (auto& e : enumerate_monos(params_.n, zeta, std::max<long>(zeta.height(), 1))) {
        PBWMonomial m = PBWMonomial::unit(params_.n);
        if (side == GenKind::E)
            m.e_exp = std::move(e);
        else
            m.f_exp = std::move(e);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<PBWMonomial> QGroup::pbw_basis_plus(const RootVector& zeta) const {
    std::vector<PBWMonomial> out;
    for (auto& e : enumerate_monos(params_.n, zeta, params_.ell - 1)) {
        PBWMonomial m = PBWMonomial::unit(params_.n);
        m.e_exp = std::move(e);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<PBWMonomial> QGroup::pbw_basis_minus(const RootVector& zeta) const {
    std::vector<PBWMonomial> out;
    for (auto& e : enumerate_monos(params_.n, zeta, params_.ell - 1)) {
        PBWMonomial m = PBWMonomial::unit(params_.n);
        m.f_exp = std::move(e);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<PBWMonomial> QGroup::truncated_monomials_plus() const {
    std::vector<PBWMonomial> out;
    for (const RootVector& zeta : truncated_degrees()) {
        auto basis = pbw_basis_plus(zeta);
        out.insert(out.end(), basis.begin(), basis.end());
    }
    return out;
}

std::vector<RootVector> QGroup::truncated_degrees() const {
    std::vector<int> bound(params_.n - 1, 0);
    for (const auto& [i, j] : positive_roots(params_.n)) {
        for (int k = j; k <= i; ++k) bound[k - 1] += static_cast<int>(params_.ell) - 1;
    }
    std::vector<RootVector> degrees;
    RootVector zeta = RootVector::zero(params_.n);
    while (true) {
        if (!pbw_basis_plus(zeta).empty()) degrees.push_back(zeta);
        size_t k = 0;
        while (k < zeta.comp.size()) {
            if (zeta.comp[k] < bound[k]) {
                zeta.comp[k]++;
                break;
            }
            zeta.comp[k] = 0;
            ++k;
        }
        if (k == zeta.comp.size()) break;
    }
    std::sort(degrees.begin(), degrees.end(), [](const RootVector& a, const RootVector& b) {
        if (a.height() != b.height()) return a.height() < b.height();
        return a.comp < b.comp;
    });
    return degrees;
}

// ---------------------------------------------------------------- root vectors / expand

NCPoly QGroup::root_vector_free(GenKind side, int i, int j) const {
    if (side != GenKind::E && side != GenKind::F)
        throw std::invalid_argument("root_vector_free: side must be E or F");
    if (j < 1 || i < j || i > params_.n - 1)
        throw std::out_of_range("root vector indices must satisfy 1 <= j <= i < n");
    auto key = std::make_pair(side == GenKind::E ? 0 : 1, RootPair{i, j});
    {
        std::lock_guard<std::mutex> lock(root_mutex_);
        auto it = root_vector_cache_.find(key);
        if (it != root_vector_cache_.end()) return it->second;
    }
    NCPoly result;
    if (i == j) {
        GenSymbol g = (side == GenKind::E) ? GenSymbol::e(i) : GenSymbol::f(i);
        result = NCPoly::generator(g, params_.ell, working_order_);
    } else {
        NCPoly inner = root_vector_free(side, i - 1, j);
        GenSymbol g = (side == GenKind::E) ? GenSymbol::e(i) : GenSymbol::f(i);
        NCPoly gi = NCPoly::generator(g, params_.ell, working_order_);
        CycScalar c = (side == GenKind::E) ? r_.inverse() : s_;
        result = gi * inner - (inner * gi).scaled(laurent(c));
    }
    std::lock_guard<std::mutex> lock(root_mutex_);
    root_vector_cache_.emplace(key, result);
    return result;
}

AlgebraElement QGroup::build_E(int i, int j) const {
    return normal_form(root_vector_free(GenKind::E, i, j));
}

AlgebraElement QGroup::build_F(int i, int j) const {
    return normal_form(root_vector_free(GenKind::F, i, j));
}

NCPoly QGroup::expand(const PBWMonomial& m) const {
    NCPoly out = NCPoly::unit(params_.ell, working_order_);
    for (const auto& [root, a] : m.f_exp) {
        NCPoly base = root_vector_free(GenKind::F, root.first, root.second);
        for (int k = 0; k < a; ++k) out = out * base;
    }
    Word group;
    for (size_t i = 0; i < m.w_exp.size(); ++i) {
        int e = m.w_exp[i];
        for (int k = 0; k < std::abs(e); ++k)
            group.letters.push_back(GenSymbol::w(static_cast<int>(i + 1), e > 0 ? 1 : -1));
    }
    for (size_t i = 0; i < m.wp_exp.size(); ++i) {
        int e = m.wp_exp[i];
        for (int k = 0; k < std::abs(e); ++k)
            group.letters.push_back(GenSymbol::wp(static_cast<int>(i + 1), e > 0 ? 1 : -1));
    }
    if (!group.empty())
        out = out * NCPoly::monomial(group, LaurentScalar::one(params_.ell, working_order_));
    for (const auto& [root, a] : m.e_exp) {
        NCPoly base = root_vector_free(GenKind::E, root.first, root.second);
        for (int k = 0; k < a; ++k) out = out * base;
    }
    return out;
}

// ---------------------------------------------------------------- normal form

AlgebraElement QGroup::normal_form(const NCPoly& p) const {
    AlgebraElement out(shared_from_this());
    if (p.is_zero()) return out;
    if (p.ell() != params_.ell)
        throw std::invalid_argument("normal_form: scalar order does not match parameters");

    auto cls = [](const GenSymbol& g) {
        if (g.kind == GenKind::F) return 0;
        if (g.group_like()) return 1;
        return 2;
    };

    std::deque<std::pair<Word, LaurentScalar>> work;
    for (const auto& [w, c] : p.terms()) {
        int eh = 0, fh = 0;
        for (const auto& g : w.letters) {
            if (g.index < 1 || g.index >= params_.n)
                throw std::out_of_range("generator index out of range for n=" +
                                        std::to_string(params_.n));
            if (g.kind == GenKind::E) ++eh;
            if (g.kind == GenKind::F) ++fh;
        }
        if (eh > params_.height_bound || fh > params_.height_bound)
            throw height_bound_error("word height exceeds height_bound");
        work.emplace_back(w, c);
    }

    const int rank = params_.n - 1;
    while (!work.empty()) {
        auto [w, c] = std::move(work.front());
        work.pop_front();
        if (c.is_zero()) continue;

        size_t k = 0;
        bool descent = false;
        for (; k + 1 < w.letters.size(); ++k) {
            if (cls(w.letters[k]) > cls(w.letters[k + 1])) {
                descent = true;
                break;
            }
        }
        if (descent) {
            GenSymbol a = w.letters[k], b = w.letters[k + 1];
            if (a.kind == GenKind::E && b.kind == GenKind::F) {
                if (a.index == b.index) {
                    LaurentScalar corr = c.scaled(r_minus_s_inv_);
                    Word withw, withwp;
                    withw.letters.assign(w.letters.begin(), w.letters.begin() + k);
                    withwp.letters = withw.letters;
                    withw.letters.push_back(GenSymbol::w(a.index));
                    withwp.letters.push_back(GenSymbol::wp(a.index));
                    withw.letters.insert(withw.letters.end(), w.letters.begin() + k + 2,
                                         w.letters.end());
                    withwp.letters.insert(withwp.letters.end(), w.letters.begin() + k + 2,
                                          w.letters.end());
                    work.emplace_back(std::move(withw), corr);
                    work.emplace_back(std::move(withwp), -corr);
                }
                Word swapped = std::move(w);
                std::swap(swapped.letters[k], swapped.letters[k + 1]);
                work.emplace_back(std::move(swapped), std::move(c));
            } else if (a.kind == GenKind::E) {
                // e_j g -> chi^{-1} g e_j
                LaurentScalar cc = c.scaled(group_move_scalar(b, a).inverse());
                Word swapped = std::move(w);
                std::swap(swapped.letters[k], swapped.letters[k + 1]);
                work.emplace_back(std::move(swapped), std::move(cc));
            } else {
                // g f_j -> chi f_j g
                LaurentScalar cc = c.scaled(group_move_scalar(a, b));
                Word swapped = std::move(w);
                std::swap(swapped.letters[k], swapped.letters[k + 1]);
                work.emplace_back(std::move(swapped), std::move(cc));
            }
            continue;
        }

        // fully ordered F* G* E*: collect exponents and reduce both wings
        std::vector<int> fword, eword;
        std::vector<int> nw(rank, 0), nwp(rank, 0);
        for (const auto& g : w.letters) {
            switch (g.kind) {
                case GenKind::F: fword.push_back(g.index); break;
                case GenKind::E: eword.push_back(g.index); break;
                case GenKind::W: nw[g.index - 1] += g.power_sign; break;
                case GenKind::Wp: nwp[g.index - 1] += g.power_sign; break;
            }
        }
        auto fred = reduce_word(GenKind::F, fword);
        auto ered = reduce_word(GenKind::E, eword);
        for (const auto& [fm, cf] : fred) {
            for (const auto& [em, ce] : ered) {
                PBWMonomial m = PBWMonomial::unit(params_.n);
                m.f_exp = fm;
                m.e_exp = em;
                m.w_exp = nw;
                m.wp_exp = nwp;
                if (params_.restricted) {
                    bool dead = false;
                    for (const auto& [root, a] : m.e_exp)
                        if (a >= params_.ell) dead = true;
                    for (const auto& [root, a] : m.f_exp)
                        if (a >= params_.ell) dead = true;
                    if (dead) continue;
                    for (auto& x : m.w_exp)
                        x = static_cast<int>(((x % params_.ell) + params_.ell) % params_.ell);
                    for (auto& x : m.wp_exp)
                        x = static_cast<int>(((x % params_.ell) + params_.ell) % params_.ell);
                }
                out.add_term(m, c * laurent(cf * ce));
            }
        }
    }
    return out;
}

AlgebraElement QGroup::mul(const AlgebraElement& a, const AlgebraElement& b) const {
    NCPoly total(params_.ell, working_order_);
    for (const auto& [ma, ca] : a.terms()) {
        NCPoly ea = expand(ma);
        for (const auto& [mb, cb] : b.terms()) {
            total += (ea * expand(mb)).scaled(ca * cb);
        }
    }
    return normal_form(total);
}

// ---------------------------------------------------------------- Hopf structure

TensorElement QGroup::coproduct(const AlgebraElement& x) const {
    TensorElement out(2, shared_from_this());
    struct Part {
        Word left, right;
    };
    for (const auto& [m, c] : x.terms()) {
        NCPoly free = expand(m);
        for (const auto& [w, cw] : free.terms()) {
            std::vector<Part> parts{{Word{}, Word{}}};
            for (const GenSymbol& g : w.letters) {
                std::vector<Part> next;
                next.reserve(parts.size() * 2);
                for (const auto& part : parts) {
                    if (g.kind == GenKind::E) {
                        Part p1 = part;
                        p1.left.letters.push_back(g);
                        next.push_back(std::move(p1));
                        Part p2 = part;
                        p2.left.letters.push_back(GenSymbol::w(g.index));
                        p2.right.letters.push_back(g);
                        next.push_back(std::move(p2));
                    } else if (g.kind == GenKind::F) {
                        Part p1 = part;
                        p1.right.letters.push_back(g);
                        next.push_back(std::move(p1));
                        Part p2 = part;
                        p2.left.letters.push_back(g);
                        p2.right.letters.push_back(GenSymbol::wp(g.index));
                        next.push_back(std::move(p2));
                    } else {
                        Part p1 = part;
                        p1.left.letters.push_back(g);
                        p1.right.letters.push_back(g);
                        next.push_back(std::move(p1));
                    }
                }
                parts = std::move(next);
            }
            LaurentScalar unit = laurent_one();
            for (const auto& part : parts) {
                AlgebraElement nl = normal_form(NCPoly::monomial(part.left, unit));
                AlgebraElement nr = normal_form(NCPoly::monomial(part.right, unit));
                for (const auto& [ml, cl] : nl.terms()) {
                    for (const auto& [mr, cr] : nr.terms()) {
                        out.add_term({ml, mr}, c * cw * cl * cr);
                    }
                }
            }
        }
    }
    return out;
}

LaurentScalar QGroup::counit(const AlgebraElement& x) const {
    LaurentScalar out = LaurentScalar::zero(params_.ell, working_order_);
    for (const auto& [m, c] : x.terms()) {
        if (m.group_only()) out += c;
    }
    return out;
}

AlgebraElement QGroup::antipode(const AlgebraElement& x) const {
    NCPoly total(params_.ell, working_order_);
    LaurentScalar unit = laurent_one();
    for (const auto& [m, c] : x.terms()) {
        NCPoly free = expand(m);
        for (const auto& [w, cw] : free.terms()) {
            NCPoly sw = NCPoly::unit(params_.ell, working_order_);
            for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
                const GenSymbol& g = *it;
                NCPoly factor(params_.ell, working_order_);
                if (g.kind == GenKind::E) {
                    factor.add_term(Word({GenSymbol::w(g.index, -1), g}), -unit);
                } else if (g.kind == GenKind::F) {
                    factor.add_term(Word({g, GenSymbol::wp(g.index, -1)}), -unit);
                } else {
                    factor.add_term(Word({GenSymbol{g.kind, g.index, -g.power_sign}}), unit);
                }
                sw = sw * factor;
            }
            total += sw.scaled(c * cw);
        }
    }
    return normal_form(total);
}

TensorElement QGroup::tensor2(const AlgebraElement& a, const AlgebraElement& b) const {
    TensorElement out(2, shared_from_this());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) out.add_term({ma, mb}, ca * cb);
    return out;
}

TensorElement QGroup::tensor_mul(const TensorElement& a, const TensorElement& b) const {
    if (a.arity() != b.arity()) throw std::invalid_argument("tensor_mul: arity mismatch");
    TensorElement out(a.arity(), shared_from_this());
    for (const auto& [sa, ca] : a.terms()) {
        for (const auto& [sb, cb] : b.terms()) {
            std::vector<AlgebraElement> prods;
            prods.reserve(sa.size());
            for (size_t k = 0; k < sa.size(); ++k)
                prods.push_back(mul(from_monomial(sa[k]), from_monomial(sb[k])));
            std::vector<std::pair<std::vector<PBWMonomial>, LaurentScalar>> acc{
                {std::vector<PBWMonomial>{}, ca * cb}};
            for (const auto& p : prods) {
                std::vector<std::pair<std::vector<PBWMonomial>, LaurentScalar>> next;
                for (const auto& [slots, cc] : acc) {
                    for (const auto& [mm, cm] : p.terms()) {
                        auto s2 = slots;
                        s2.push_back(mm);
                        next.emplace_back(std::move(s2), cc * cm);
                    }
                }
                acc = std::move(next);
            }
            for (auto& [slots, cc] : acc) out.add_term(std::move(slots), cc);
        }
    }
    return out;
}

// ---------------------------------------------------------------- p_i extraction

bool QGroup::is_plus_homogeneous(const AlgebraElement& x, RootVector* deg) const {
    std::optional<RootVector> d;
    for (const auto& [m, c] : x.terms()) {
        if (!m.f_exp.empty()) return false;
        for (int k : m.w_exp)
            if (k) return false;
        for (int k : m.wp_exp)
            if (k) return false;
        RootVector md = m.e_degree(params_.n);
        if (!d)
            d = md;
        else if (*d != md)
            return false;
    }
    if (deg) *deg = d ? *d : RootVector::zero(params_.n);
    return true;
}

bool QGroup::is_minus_homogeneous(const AlgebraElement& y, RootVector* deg) const {
    std::optional<RootVector> d;
    for (const auto& [m, c] : y.terms()) {
        if (!m.e_exp.empty()) return false;
        for (int k : m.w_exp)
            if (k) return false;
        for (int k : m.wp_exp)
            if (k) return false;
        RootVector md = m.f_degree(params_.n);
        if (!d)
            d = md;
        else if (*d != md)
            return false;
    }
    if (deg) *deg = d ? *d : RootVector::zero(params_.n);
    return true;
}

std::pair<AlgebraElement, AlgebraElement> QGroup::extract_p(const AlgebraElement& x,
                                                            int i) const {
    RootVector zeta;
    if (!is_plus_homogeneous(x, &zeta))
        throw std::invalid_argument("extract_p: element is not homogeneous in U^+");
    AlgebraElement p(shared_from_this()), pp(shared_from_this());
    if (x.is_zero() || zeta.is_zero()) return {p, pp};
    RootVector target = zeta - RootVector::alpha(params_.n, i);

    TensorElement delta = coproduct(x);

    PBWMonomial ei = PBWMonomial::unit(params_.n);
    ei.e_exp[{i, i}] = 1;

    // scalar for omega_i moved left past an E-part of degree eta
    auto kappa_w = [&](const RootVector& eta) {
        CycScalar c = CycScalar::one(params_.ell);
        for (int j = 1; j <= params_.n - 1; ++j) c *= rho(i, j).pow(eta.comp[j - 1]);
        return c;
    };
    // scalar for omega_nu moved left past a single e_i
    auto kappa_nu = [&](const std::vector<int>& nu) {
        CycScalar c = CycScalar::one(params_.ell);
        for (int k = 1; k <= params_.n - 1; ++k) c *= rho(k, i).pow(nu[k - 1]);
        return c;
    };

    for (const auto& [slots, c] : delta.terms()) {
        const PBWMonomial& m1 = slots[0];
        const PBWMonomial& m2 = slots[1];
        if (m2 == ei) {
            // p_i term: first slot is (E-part of degree zeta - alpha_i) . omega_i
            bool shape = m1.f_exp.empty();
            for (int k : m1.wp_exp) shape = shape && k == 0;
            for (int k = 1; k <= params_.n - 1 && shape; ++k)
                shape = m1.w_exp[k - 1] == (k == i ? 1 : 0);
            if (!shape || m1.e_degree(params_.n) != target)
                throw std::logic_error("extract_p: unexpected coproduct shape");
            PBWMonomial stripped = m1;
            stripped.w_exp.assign(params_.n - 1, 0);
            p.add_term(stripped, c.scaled(kappa_w(target)));
        }
        if (m1.f_exp.empty() && m1.e_exp == ei.e_exp) {
            // p'_i term: first slot is e_i . omega_{zeta - alpha_i}
            bool shape = true;
            for (int k : m1.wp_exp) shape = shape && k == 0;
            RootVector nuv(m1.w_exp);
            if (shape && nuv == target) {
                bool pure = m2.f_exp.empty();
                for (int k : m2.w_exp) pure = pure && k == 0;
                for (int k : m2.wp_exp) pure = pure && k == 0;
                if (!pure || m2.e_degree(params_.n) != target)
                    throw std::logic_error("extract_p: unexpected coproduct shape (p')");
                pp.add_term(m2, c.scaled(kappa_nu(m1.w_exp)));
            }
        }
    }
    return {p, pp};
}

std::pair<AlgebraElement, AlgebraElement> QGroup::extract_p_minus(const AlgebraElement& y,
                                                                  int i) const {
    RootVector zeta;
    if (!is_minus_homogeneous(y, &zeta))
        throw std::invalid_argument("extract_p_minus: element is not homogeneous in U^-");
    AlgebraElement p(shared_from_this()), pp(shared_from_this());
    if (y.is_zero() || zeta.is_zero()) return {p, pp};
    RootVector target = zeta - RootVector::alpha(params_.n, i);

    TensorElement delta = coproduct(y);

    PBWMonomial fi = PBWMonomial::unit(params_.n);
    fi.f_exp[{i, i}] = 1;

    for (const auto& [slots, c] : delta.terms()) {
        const PBWMonomial& m1 = slots[0];
        const PBWMonomial& m2 = slots[1];
        if (m1 == fi) {
            // p'_i term: second slot is (F-part) . omega'_i, already in normal order
            bool shape = m2.e_exp.empty();
            for (int k : m2.w_exp) shape = shape && k == 0;
            for (int k = 1; k <= params_.n - 1 && shape; ++k)
                shape = m2.wp_exp[k - 1] == (k == i ? 1 : 0);
            if (!shape || m2.f_degree(params_.n) != target)
                throw std::logic_error("extract_p_minus: unexpected coproduct shape (p')");
            PBWMonomial stripped = m2;
            stripped.wp_exp.assign(params_.n - 1, 0);
            pp.add_term(stripped, c);
        }
        if (m2.e_exp.empty() && m2.f_exp == fi.f_exp) {
            // p_i term: second slot is f_i . omega'_{zeta - alpha_i}
            bool shape = true;
            for (int k : m2.w_exp) shape = shape && k == 0;
            RootVector nuv(m2.wp_exp);
            if (shape && nuv == target) {
                bool pure = m1.e_exp.empty();
                for (int k : m1.w_exp) pure = pure && k == 0;
                for (int k : m1.wp_exp) pure = pure && k == 0;
                if (!pure || m1.f_degree(params_.n) != target)
                    throw std::logic_error("extract_p_minus: unexpected coproduct shape (p)");
                p.add_term(m1, c);
            }
        }
    }
    return {p, pp};
}

// ---------------------------------------------------------------- relations

std::vector<NCPoly> QGroup::defining_relations() const {
    std::vector<NCPoly> rels;
    const long ell = params_.ell;
    const int wo = working_order_;
    auto gen = [&](GenSymbol g) { return NCPoly::generator(g, ell, wo); };
    auto sc = [&](const CycScalar& c) { return LaurentScalar::from_cyc(c, wo); };
    const int rank = params_.n - 1;

    // (R1)
    for (int i = 1; i <= rank; ++i) {
        rels.push_back(gen(GenSymbol::w(i)) * gen(GenSymbol::w(i, -1)) - NCPoly::unit(ell, wo));
        rels.push_back(gen(GenSymbol::wp(i)) * gen(GenSymbol::wp(i, -1)) - NCPoly::unit(ell, wo));
        for (int j = 1; j <= rank; ++j) {
            rels.push_back(gen(GenSymbol::w(i)) * gen(GenSymbol::wp(j)) -
                           gen(GenSymbol::wp(j)) * gen(GenSymbol::w(i)));
            if (j > i) {
                rels.push_back(gen(GenSymbol::w(i)) * gen(GenSymbol::w(j)) -
                               gen(GenSymbol::w(j)) * gen(GenSymbol::w(i)));
                rels.push_back(gen(GenSymbol::wp(i)) * gen(GenSymbol::wp(j)) -
                               gen(GenSymbol::wp(j)) * gen(GenSymbol::wp(i)));
            }
        }
    }
    // (R2)/(R3)
    for (int i = 1; i <= rank; ++i) {
        for (int j = 1; j <= rank; ++j) {
            rels.push_back(gen(GenSymbol::w(i)) * gen(GenSymbol::e(j)) -
                           (gen(GenSymbol::e(j)) * gen(GenSymbol::w(i))).scaled(sc(rho(i, j))));
            rels.push_back(
                gen(GenSymbol::w(i)) * gen(GenSymbol::f(j)) -
                (gen(GenSymbol::f(j)) * gen(GenSymbol::w(i))).scaled(sc(rho(i, j).inverse())));
            rels.push_back(gen(GenSymbol::wp(i)) * gen(GenSymbol::e(j)) -
                           (gen(GenSymbol::e(j)) * gen(GenSymbol::wp(i))).scaled(sc(rho_p(i, j))));
            rels.push_back(
                gen(GenSymbol::wp(i)) * gen(GenSymbol::f(j)) -
                (gen(GenSymbol::f(j)) * gen(GenSymbol::wp(i))).scaled(sc(rho_p(i, j).inverse())));
        }
    }
    // (R4)
    for (int i = 1; i <= rank; ++i) {
        for (int j = 1; j <= rank; ++j) {
            NCPoly rel = gen(GenSymbol::e(i)) * gen(GenSymbol::f(j)) -
                         gen(GenSymbol::f(j)) * gen(GenSymbol::e(i));
            if (i == j) {
                NCPoly grp = NCPoly::generator(GenSymbol::w(i), ell, wo) -
                             NCPoly::generator(GenSymbol::wp(i), ell, wo);
                rel -= grp.scaled(sc(r_minus_s_inv_));
            }
            rels.push_back(rel);
        }
    }
    // (R5)
    for (int i = 1; i <= rank; ++i) {
        for (int j = i + 2; j <= rank; ++j) {
            rels.push_back(gen(GenSymbol::e(i)) * gen(GenSymbol::e(j)) -
                           gen(GenSymbol::e(j)) * gen(GenSymbol::e(i)));
            rels.push_back(gen(GenSymbol::f(i)) * gen(GenSymbol::f(j)) -
                           gen(GenSymbol::f(j)) * gen(GenSymbol::f(i)));
        }
    }
    // (R6)/(R7)
    for (int i = 1; i + 1 <= rank; ++i) {
        NCPoly ei = gen(GenSymbol::e(i)), e1 = gen(GenSymbol::e(i + 1));
        NCPoly fi = gen(GenSymbol::f(i)), f1 = gen(GenSymbol::f(i + 1));
        CycScalar rp = r_ + s_, rs = r_ * s_;
        CycScalar rpi = r_.inverse() + s_.inverse(), rsi = (r_ * s_).inverse();
        rels.push_back(ei * ei * e1 - (ei * e1 * ei).scaled(sc(rp)) +
                       (e1 * ei * ei).scaled(sc(rs)));
        rels.push_back(ei * e1 * e1 - (e1 * ei * e1).scaled(sc(rp)) +
                       (e1 * e1 * ei).scaled(sc(rs)));
        rels.push_back(fi * fi * f1 - (fi * f1 * fi).scaled(sc(rpi)) +
                       (f1 * fi * fi).scaled(sc(rsi)));
        rels.push_back(fi * f1 * f1 - (f1 * fi * f1).scaled(sc(rpi)) +
                       (f1 * f1 * fi).scaled(sc(rsi)));
    }
    return rels;
}

}  // namespace qdeform
