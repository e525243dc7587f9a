#include "qdeform/modalg.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace qdeform {

// ---------------------------------------------------------------- ModuleElement

void ModuleElement::add_term(int label, const LaurentScalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(label);
    if (it == terms_.end()) {
        terms_.emplace(label, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

ModuleElement ModuleElement::operator-() const {
    ModuleElement out;
    for (const auto& [l, c] : terms_) out.terms_.emplace(l, -c);
    return out;
}

ModuleElement& ModuleElement::operator+=(const ModuleElement& o) {
    for (const auto& [l, c] : o.terms_) add_term(l, c);
    return *this;
}

ModuleElement& ModuleElement::operator-=(const ModuleElement& o) {
    for (const auto& [l, c] : o.terms_) add_term(l, -c);
    return *this;
}

ModuleElement ModuleElement::scaled(const LaurentScalar& c) const {
    ModuleElement out;
    for (const auto& [l, v] : terms_) out.add_term(l, v * c);
    return out;
}

std::optional<int> ModuleElement::min_t_degree() const {
    std::optional<int> deg;
    for (const auto& [l, c] : terms_) {
        int low = c.lowest_exponent();
        if (!deg || low < *deg) deg = low;
    }
    return deg;
}

// ---------------------------------------------------------------- ModuleAlgebra

ModuleAlgebra::ModuleAlgebra(Setup s) : setup_(std::move(s)) {
    if (setup_.labels.size() != setup_.grades.size())
        throw std::invalid_argument("ModuleAlgebra: labels/grades size mismatch");
    for (int i = 0; i < static_cast<int>(setup_.labels.size()); ++i)
        index_.emplace(setup_.labels[i], i);
}

int ModuleAlgebra::label_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("ModuleAlgebra: unknown label " + name);
    return it->second;
}

int ModuleAlgebra::unit() const {
    if (setup_.unit < 0) throw std::logic_error(setup_.kind + " carries no product");
    return setup_.unit;
}

ModuleElement ModuleAlgebra::basis(int i) const {
    ModuleElement m;
    m.add_term(i, LaurentScalar::one(setup_.ctx->ell(), setup_.ctx->working_order()));
    return m;
}

ModuleElement ModuleAlgebra::product(int a, int b) const {
    if (!has_product()) throw std::logic_error(setup_.kind + " carries no product");
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        auto it = memo_->prod.find({a, b});
        if (it != memo_->prod.end()) return it->second;
    }
    ModuleElement out = setup_.product_rule(*this, a, b);
    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->prod.emplace(std::make_pair(a, b), out);
    return out;
}

ModuleElement ModuleAlgebra::mul(const ModuleElement& a, const ModuleElement& b) const {
    ModuleElement out;
    for (const auto& [la, ca] : a.terms()) {
        for (const auto& [lb, cb] : b.terms()) {
            out += product(la, lb).scaled(ca * cb);
        }
    }
    return out;
}

ModuleElement ModuleAlgebra::act_gen(GenSymbol g, int label) const {
    auto key = std::make_pair(std::make_pair(static_cast<int>(g.kind),
                                             g.index * (g.group_like() ? g.power_sign : 1)),
                              label);
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        auto it = memo_->act.find(key);
        if (it != memo_->act.end()) return it->second;
    }
    ModuleElement out = setup_.action_rule(*this, g, label);
    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->act.emplace(key, out);
    return out;
}

ModuleElement ModuleAlgebra::act_gen(GenSymbol g, const ModuleElement& m) const {
    ModuleElement out;
    for (const auto& [l, c] : m.terms()) out += act_gen(g, l).scaled(c);
    return out;
}

ModuleElement ModuleAlgebra::act_word(const Word& w, const ModuleElement& m) const {
    ModuleElement cur = m;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        if (cur.is_zero()) return cur;
        cur = act_gen(*it, cur);
    }
    return cur;
}

ModuleElement ModuleAlgebra::act_poly(const NCPoly& p, const ModuleElement& m) const {
    ModuleElement out;
    for (const auto& [w, c] : p.terms()) out += act_word(w, m).scaled(c);
    return out;
}

ModuleElement ModuleAlgebra::act(const AlgebraElement& u, const ModuleElement& m) const {
    ModuleElement out;
    for (const auto& [mono, c] : u.terms()) {
        out += act_poly(setup_.ctx->expand(mono), m).scaled(c);
    }
    return out;
}

bool ModuleAlgebra::diagonal_weights() const {
    return !setup_.weights.empty();
}

const WeightChar& ModuleAlgebra::label_weight(int i) const {
    if (setup_.weights.empty() || !setup_.weights.at(i))
        throw std::logic_error("ModuleAlgebra: labels are not weight vectors");
    return *setup_.weights.at(i);
}

const WeightChar& ModuleAlgebra::base_char() const {
    if (!setup_.base_char) throw std::logic_error("ModuleAlgebra: no weight view");
    return *setup_.base_char;
}

const RootVector& ModuleAlgebra::label_lambda(int i) const {
    if (!has_weight_view()) throw std::logic_error("ModuleAlgebra: no weight view");
    return setup_.lambdas.at(i);
}

std::string ModuleAlgebra::element_to_string(const ModuleElement& m) const {
    if (m.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [l, c] : m.terms()) {
        if (!first) os << " + ";
        first = false;
        std::string cs = c.to_string();
        if (cs == "1") {
            os << label(l);
        } else {
            bool composite = cs.find(' ') != std::string::npos;
            os << (composite ? "(" + cs + ")" : cs) << "*" << label(l);
        }
    }
    return os.str();
}

// ---------------------------------------------------------------- word core

namespace {

std::string word_name(const std::vector<int>& atoms) {
    if (atoms.empty()) return "1";
    std::ostringstream os;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) os << ".";
        os << "v" << atoms[i];
    }
    return os.str();
}

std::string vec_name(const std::vector<int>& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    os << ")";
    return os.str();
}

void all_words_of_length(int n, int len, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(len, 1);
    if (len == 0) {
        out.push_back({});
        return;
    }
    while (true) {
        out.push_back(cur);
        int k = len - 1;
        while (k >= 0) {
            if (cur[k] < n) {
                cur[k]++;
                break;
            }
            cur[k] = 1;
            --k;
        }
        if (k < 0) break;
    }
}

void all_group_vectors(int rank, long ell, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(rank, 0);
    while (true) {
        out.push_back(cur);
        int k = rank - 1;
        while (k >= 0) {
            if (cur[k] + 1 < ell) {
                cur[k]++;
                break;
            }
            cur[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
}

// one summand of an atom action: target atom, group shift, coefficient
struct AtomTerm {
    int atom;
    std::vector<int> shift;  // empty when the algebra has no group component
    LaurentScalar coeff;
};

// one raw term of a word computation before canonicalization
struct RawTerm {
    std::vector<int> atoms;
    std::vector<int> group;
    LaurentScalar coeff;
};

struct WordCore : std::enable_shared_from_this<WordCore> {
    std::shared_ptr<const QGroup> ctx;
    int n = 2;
    long ell = 2;
    int wo = LaurentScalar::kDefaultWorkingOrder;
    int maxdeg = 0;
    bool star = false;     // atoms rescaled by the t-character
    bool smash = false;    // the printed t- and group-carrying action
    int cutoff = 0;        // words of length >= cutoff vanish (0: none)
    std::vector<CycScalar> beta;  // group twist scalars (smash only)

    // quotient data (empty when the algebra is free over the atoms)
    struct Slice {
        std::vector<std::vector<int>> words;
        std::map<std::vector<int>, int> col;
        std::unique_ptr<RowSpan> span;
        std::vector<int> free_cols;
    };
    std::vector<std::shared_ptr<Slice>> slices;  // indexed by word length
    bool quotient = false;

    std::vector<std::pair<std::vector<int>, std::vector<int>>> reps;  // label -> (atoms, group)
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> index;

    bool has_group() const { return !beta.empty(); }

    LaurentScalar lone() const { return LaurentScalar::one(ell, wo); }

    std::vector<AtomTerm> atom_act(GenSymbol g, int atom) const {
        const CycScalar r = ctx->r(), s = ctx->s();
        std::vector<int> zero_shift(has_group() ? n - 1 : 0, 0);
        auto term = [&](int target, const CycScalar& c, int tpow, int shift_dir) {
            AtomTerm t{target, zero_shift, LaurentScalar::term(c, tpow, wo)};
            if (has_group() && shift_dir != 0) t.shift[g.index - 1] = shift_dir;
            return t;
        };
        std::vector<AtomTerm> out;
        const int i = g.index, j = atom;
        switch (g.kind) {
            case GenKind::E:
                if (i == j - 1) {
                    if (smash)
                        out.push_back(term(j - 1, CycScalar::one(ell), 1, 1));
                    else
                        out.push_back(term(j - 1, CycScalar::one(ell), star ? 1 : 0, 0));
                }
                break;
            case GenKind::F:
                if (i == j && j + 1 <= n) out.push_back(term(j + 1, CycScalar::one(ell), 0, 0));
                break;
            case GenKind::W: {
                CycScalar c = (r.pow(i == j ? 1 : 0) * s.pow(i == j - 1 ? 1 : 0)).pow(g.power_sign);
                if (smash)
                    out.push_back(term(j, c, g.power_sign, g.power_sign));
                else
                    out.push_back(term(j, c, star ? g.power_sign : 0, 0));
                break;
            }
            case GenKind::Wp: {
                CycScalar c = (r.pow(i == j - 1 ? 1 : 0) * s.pow(i == j ? 1 : 0)).pow(g.power_sign);
                if (smash)
                    out.push_back(term(j, c, g.power_sign, g.power_sign));
                else
                    out.push_back(term(j, c, star ? g.power_sign : 0, 0));
                break;
            }
        }
        return out;
    }

    // smash twist: left group part acts on the right atoms
    RawTerm combine(const RawTerm& a, const RawTerm& b) const {
        RawTerm out;
        out.atoms = a.atoms;
        out.atoms.insert(out.atoms.end(), b.atoms.begin(), b.atoms.end());
        out.coeff = a.coeff * b.coeff;
        if (has_group()) {
            long m = static_cast<long>(b.atoms.size());
            CycScalar twist = CycScalar::one(ell);
            for (size_t i = 0; i < beta.size(); ++i) {
                long e = a.group[i] * m;
                if (e) twist *= beta[i].pow(e);
            }
            out.coeff = out.coeff.scaled(twist);
            out.group.resize(beta.size());
            for (size_t i = 0; i < beta.size(); ++i)
                out.group[i] =
                    static_cast<int>(((a.group[i] + b.group[i]) % ell + ell) % ell);
        }
        return out;
    }

    std::vector<RawTerm> combine_all(const std::vector<RawTerm>& acc,
                                     const std::vector<RawTerm>& next) const {
        std::vector<RawTerm> out;
        out.reserve(acc.size() * next.size());
        for (const auto& a : acc)
            for (const auto& b : next) out.push_back(combine(a, b));
        return out;
    }

    RawTerm unit_term() const {
        RawTerm t;
        t.group.assign(has_group() ? beta.size() : 0, 0);
        t.coeff = lone();
        return t;
    }

    std::vector<RawTerm> atom_terms_raw(GenSymbol g, int atom) const {
        std::vector<RawTerm> out;
        for (const auto& at : atom_act(g, atom)) {
            RawTerm t;
            t.atoms = {at.atom};
            t.group = at.shift;
            t.coeff = at.coeff;
            out.push_back(std::move(t));
        }
        return out;
    }

    std::vector<RawTerm> identity_slot(int atom) const {
        RawTerm t = unit_term();
        t.atoms = {atom};
        return {t};
    }

    // generator action on a (word, group) pair via the iterated coproduct
    std::vector<RawTerm> act_gen_raw(GenSymbol g, const std::vector<int>& atoms,
                                     const std::vector<int>& group) const {
        RawTerm tail = unit_term();
        tail.group = group;
        std::vector<RawTerm> result;
        if (g.group_like()) {
            std::vector<RawTerm> acc{unit_term()};
            for (int a : atoms) acc = combine_all(acc, atom_terms_raw(g, a));
            acc = combine_all(acc, {tail});
            return acc;
        }
        // e_i: slots before the action slot carry omega_i; f_i: slots after
        // carry omega'_i; the group tail is acted on through the counit
        const int k = static_cast<int>(atoms.size());
        for (int p = 0; p < k; ++p) {
            std::vector<RawTerm> acc{unit_term()};
            bool dead = false;
            for (int q = 0; q < k && !dead; ++q) {
                std::vector<RawTerm> slot;
                if (q == p) {
                    slot = atom_terms_raw(g, atoms[q]);
                } else if (g.kind == GenKind::E && q < p) {
                    slot = atom_terms_raw(GenSymbol::w(g.index), atoms[q]);
                } else if (g.kind == GenKind::F && q > p) {
                    slot = atom_terms_raw(GenSymbol::wp(g.index), atoms[q]);
                } else {
                    slot = identity_slot(atoms[q]);
                }
                if (slot.empty()) {
                    dead = true;
                    break;
                }
                acc = combine_all(acc, slot);
            }
            if (dead) continue;
            acc = combine_all(acc, {tail});
            result.insert(result.end(), acc.begin(), acc.end());
        }
        return result;
    }

    // express a raw term in the label basis (applying the quotient or cutoff)
    ModuleElement canonicalize(const RawTerm& t, bool from_product) const {
        ModuleElement out;
        if (t.coeff.is_zero()) return out;
        int len = static_cast<int>(t.atoms.size());
        if (cutoff > 0 && len >= cutoff) return out;
        if (len > maxdeg)
            throw degree_overflow_error(
                from_product ? "product exceeds maxdeg; rebuild with a larger degree cap"
                             : "action exceeds maxdeg");
        if (!quotient) {
            out.add_term(index.at({t.atoms, t.group}), t.coeff);
            return out;
        }
        const Slice& sl = *slices[len];
        std::vector<CycScalar> v(sl.words.size(), CycScalar::zero(ell));
        v[sl.col.at(t.atoms)] = CycScalar::one(ell);
        std::vector<CycScalar> res = sl.span->residue(std::move(v));
        for (int c : sl.free_cols) {
            if (res[c].is_zero()) continue;
            out.add_term(index.at({sl.words[c], t.group}), t.coeff.scaled(res[c]));
        }
        return out;
    }

    ModuleElement canonicalize_all(const std::vector<RawTerm>& ts, bool from_product) const {
        ModuleElement out;
        for (const auto& t : ts) out += canonicalize(t, from_product);
        return out;
    }
};

// builds slices for a degree-3 homogeneous ideal given by generator elements
void build_quotient_slices(WordCore& core,
                           const std::vector<std::map<std::vector<int>, CycScalar>>& gens) {
    core.quotient = true;
    core.slices.resize(core.maxdeg + 1);
    for (int k = 0; k <= core.maxdeg; ++k) {
        auto slice = std::make_shared<WordCore::Slice>();
        all_words_of_length(core.n, k, slice->words);
        for (int c = 0; c < static_cast<int>(slice->words.size()); ++c)
            slice->col.emplace(slice->words[c], c);
        std::vector<int> pivot_order(slice->words.size());
        for (size_t c = 0; c < slice->words.size(); ++c) pivot_order[c] = static_cast<int>(c);
        slice->span = std::make_unique<RowSpan>(static_cast<int>(slice->words.size()), core.ell,
                                                pivot_order);
        if (k >= 3) {
            std::vector<std::vector<int>> prefixes, suffixes;
            for (int a = 0; a + 3 <= k; ++a) {
                prefixes.clear();
                suffixes.clear();
                all_words_of_length(core.n, a, prefixes);
                all_words_of_length(core.n, k - 3 - a, suffixes);
                for (const auto& u : prefixes) {
                    for (const auto& v : suffixes) {
                        for (const auto& gen : gens) {
                            std::vector<CycScalar> row(slice->words.size(),
                                                       CycScalar::zero(core.ell));
                            for (const auto& [gw, gc] : gen) {
                                std::vector<int> w = u;
                                w.insert(w.end(), gw.begin(), gw.end());
                                w.insert(w.end(), v.begin(), v.end());
                                row[slice->col.at(w)] += gc;
                            }
                            slice->span->insert(std::move(row));
                        }
                    }
                }
            }
        }
        slice->free_cols = slice->span->free_columns();
        std::sort(slice->free_cols.begin(), slice->free_cols.end());
        core.slices[k] = std::move(slice);
    }
}

// label table, product rule and action rule shared by all word algebras
ModuleAlgebra finish_word_algebra(std::shared_ptr<WordCore> core, const std::string& kind) {
    ModuleAlgebra::Setup s;
    s.kind = kind;
    s.ctx = core->ctx;
    s.maxdeg = core->maxdeg;

    std::vector<std::vector<int>> groups;
    if (core->has_group())
        all_group_vectors(core->n - 1, core->ell, groups);
    else
        groups.push_back({});

    for (int k = 0; k <= core->maxdeg; ++k) {
        if (core->cutoff > 0 && k >= core->cutoff) break;
        std::vector<std::vector<int>> words;
        if (core->quotient) {
            for (int c : core->slices[k]->free_cols) words.push_back(core->slices[k]->words[c]);
        } else {
            all_words_of_length(core->n, k, words);
        }
        for (const auto& w : words) {
            for (const auto& g : groups) {
                int id = static_cast<int>(core->reps.size());
                core->reps.emplace_back(w, g);
                core->index.emplace(std::make_pair(w, g), id);
                std::string name = word_name(w);
                if (core->has_group()) name += "#a" + vec_name(g);
                s.labels.push_back(name);
                s.grades.push_back(k);
            }
        }
    }
    std::vector<int> zero_group(core->has_group() ? core->n - 1 : 0, 0);
    s.unit = core->index.at({std::vector<int>{}, zero_group});

    s.product_rule = [core](const ModuleAlgebra&, int a, int b) {
        const auto& [wa, ga] = core->reps[a];
        const auto& [wb, gb] = core->reps[b];
        RawTerm ta{wa, ga, core->lone()};
        RawTerm tb{wb, gb, core->lone()};
        return core->canonicalize(core->combine(ta, tb), true);
    };
    s.action_rule = [core](const ModuleAlgebra&, GenSymbol g, int label) {
        const auto& [w, grp] = core->reps[label];
        return core->canonicalize_all(core->act_gen_raw(g, w, grp), false);
    };

    // word labels are simultaneous eigenvectors exactly when the action
    // carries no group shifts
    if (!core->has_group()) {
        const auto& ctx = *core->ctx;
        for (const auto& [w, grp] : core->reps) {
            std::vector<LaurentScalar> vw, vwp;
            for (int i = 1; i <= core->n - 1; ++i) {
                LaurentScalar cw = core->lone(), cwp = core->lone();
                for (int a : w) {
                    cw *= core->atom_act(GenSymbol::w(i), a)[0].coeff;
                    cwp *= core->atom_act(GenSymbol::wp(i), a)[0].coeff;
                }
                (void)ctx;
                vw.push_back(cw);
                vwp.push_back(cwp);
            }
            s.weights.emplace_back(WeightChar(std::move(vw), std::move(vwp)));
        }
    }
    return ModuleAlgebra(std::move(s));
}

}  // namespace

// ---------------------------------------------------------------- natural module

ModuleAlgebra natural_module(std::shared_ptr<const QGroup> ctx) {
    const int n = ctx->n();
    ModuleAlgebra::Setup s;
    s.kind = "natural";
    s.ctx = ctx;
    s.maxdeg = 1;
    for (int j = 1; j <= n; ++j) {
        s.labels.push_back("v" + std::to_string(j));
        s.grades.push_back(1);
    }
    s.unit = -1;

    const CycScalar r = ctx->r(), s_ = ctx->s();
    const long ell = ctx->ell();
    const int wo = ctx->working_order();
    s.action_rule = [n, r, s_, ell, wo](const ModuleAlgebra&, GenSymbol g, int label) {
        const int j = label + 1;
        const int i = g.index;
        ModuleElement out;
        switch (g.kind) {
            case GenKind::E:
                if (i == j - 1) out.add_term(j - 2, LaurentScalar::one(ell, wo));
                break;
            case GenKind::F:
                if (i == j && j + 1 <= n) out.add_term(j, LaurentScalar::one(ell, wo));
                break;
            case GenKind::W: {
                CycScalar c =
                    (r.pow(i == j ? 1 : 0) * s_.pow(i == j - 1 ? 1 : 0)).pow(g.power_sign);
                out.add_term(label, LaurentScalar::from_cyc(c, wo));
                break;
            }
            case GenKind::Wp: {
                CycScalar c =
                    (r.pow(i == j - 1 ? 1 : 0) * s_.pow(i == j ? 1 : 0)).pow(g.power_sign);
                out.add_term(label, LaurentScalar::from_cyc(c, wo));
                break;
            }
        }
        return out;
    };

    for (int j = 1; j <= n; ++j) {
        std::vector<LaurentScalar> vw, vwp;
        for (int i = 1; i <= n - 1; ++i) {
            vw.push_back(LaurentScalar::from_cyc(
                r.pow(i == j ? 1 : 0) * s_.pow(i == j - 1 ? 1 : 0), wo));
            vwp.push_back(LaurentScalar::from_cyc(
                r.pow(i == j - 1 ? 1 : 0) * s_.pow(i == j ? 1 : 0), wo));
        }
        s.weights.emplace_back(WeightChar(std::move(vw), std::move(vwp)));
    }
    // weight view: v_j has weight chi . (eps_j - eps_n)^ with chi = weight(v_n)
    s.base_char = *s.weights.back();
    for (int j = 1; j <= n; ++j) {
        std::vector<int> lam(n - 1, 0);
        for (int k = j; k <= n - 1; ++k) lam[k - 1] = 1;
        s.lambdas.emplace_back(std::move(lam));
    }
    return ModuleAlgebra(std::move(s));
}

// ---------------------------------------------------------------- quantum plane

namespace {

struct QPlaneCore {
    std::shared_ptr<const QGroup> ctx;
    int n;
    long ell;
    int wo;
    int maxdeg;
    bool star = false;
    std::vector<std::vector<int>> degs;  // label -> exponent vector
    std::map<std::vector<int>, int> index;

    // [d] = (r^d - s^d)/(r - s)
    CycScalar qint(long d) const {
        return (ctx->r().pow(d) - ctx->s().pow(d)) * (ctx->r() - ctx->s()).inverse();
    }
};

}  // namespace

ModuleAlgebra quantum_plane(std::shared_ptr<const QGroup> ctx, int maxdeg) {
    if (maxdeg < 1) throw std::invalid_argument("quantum_plane: maxdeg must be >= 1");
    auto core = std::make_shared<QPlaneCore>();
    core->ctx = ctx;
    core->n = ctx->n();
    core->ell = ctx->ell();
    core->wo = ctx->working_order();
    core->maxdeg = maxdeg;

    ModuleAlgebra::Setup s;
    s.kind = "qplane";
    s.ctx = ctx;
    s.maxdeg = maxdeg;
    // monomials x(d) ordered by total degree then lex
    std::vector<int> d(core->n, 0);
    std::function<void(int, int, int)> emit = [&](int pos, int remaining, int total) {
        if (pos == core->n - 1) {
            d[pos] = remaining;
            int id = static_cast<int>(core->degs.size());
            core->degs.push_back(d);
            core->index.emplace(d, id);
            s.labels.push_back("x" + vec_name(d));
            s.grades.push_back(total);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            d[pos] = k;
            emit(pos + 1, remaining - k, total);
        }
        d[pos] = 0;
    };
    for (int total = 0; total <= maxdeg; ++total) emit(0, total, total);
    s.unit = core->index.at(std::vector<int>(core->n, 0));

    s.product_rule = [core](const ModuleAlgebra&, int a, int b) {
        const auto& da = core->degs[a];
        const auto& db = core->degs[b];
        int total = 0;
        std::vector<int> sum(core->n);
        for (int k = 0; k < core->n; ++k) {
            sum[k] = da[k] + db[k];
            total += sum[k];
        }
        if (total > core->maxdeg)
            throw degree_overflow_error("quantum plane product exceeds maxdeg");
        // x_k x_j = r x_j x_k for k < j, so sorting db past da costs r^{-inv}
        long inv = 0;
        for (int k = 0; k < core->n; ++k)
            for (int j = 0; j < k; ++j) inv += static_cast<long>(da[k]) * db[j];
        ModuleElement out;
        out.add_term(core->index.at(sum),
                     LaurentScalar::from_cyc(core->ctx->r().pow(-inv), core->wo));
        return out;
    };

    s.action_rule = [core](const ModuleAlgebra&, GenSymbol g, int label) {
        const auto& d = core->degs[label];
        const int i = g.index;
        const CycScalar r = core->ctx->r(), sc = core->ctx->s();
        ModuleElement out;
        int tshift = 0;
        if (core->star) tshift = (g.kind == GenKind::F) ? 0 : (g.group_like() ? g.power_sign : 1);
        switch (g.kind) {
            case GenKind::E: {
                if (d[i] == 0) break;  // d_{i+1} in 1-based indexing
                CycScalar c = r.pow(d[i - 1] - d[i] + 1) * core->qint(d[i]);
                if (c.is_zero()) break;
                std::vector<int> nd = d;
                nd[i - 1]++;
                nd[i]--;
                out.add_term(core->index.at(nd), LaurentScalar::term(c, tshift, core->wo));
                break;
            }
            case GenKind::F: {
                if (d[i - 1] == 0) break;
                CycScalar c = r.pow(d[i] - d[i - 1] + 1) * core->qint(d[i - 1]);
                if (c.is_zero()) break;
                std::vector<int> nd = d;
                nd[i - 1]--;
                nd[i]++;
                out.add_term(core->index.at(nd), LaurentScalar::term(c, tshift, core->wo));
                break;
            }
            case GenKind::W: {
                CycScalar c = (r.pow(d[i - 1]) * sc.pow(d[i])).pow(g.power_sign);
                out.add_term(label, LaurentScalar::term(c, tshift, core->wo));
                break;
            }
            case GenKind::Wp: {
                CycScalar c = (r.pow(d[i]) * sc.pow(d[i - 1])).pow(g.power_sign);
                out.add_term(label, LaurentScalar::term(c, tshift, core->wo));
                break;
            }
        }
        return out;
    };

    for (const auto& d : core->degs) {
        std::vector<LaurentScalar> vw, vwp;
        for (int i = 1; i <= core->n - 1; ++i) {
            vw.push_back(LaurentScalar::from_cyc(
                core->ctx->r().pow(d[i - 1]) * core->ctx->s().pow(d[i]), core->wo));
            vwp.push_back(LaurentScalar::from_cyc(
                core->ctx->r().pow(d[i]) * core->ctx->s().pow(d[i - 1]), core->wo));
        }
        s.weights.emplace_back(WeightChar(std::move(vw), std::move(vwp)));
    }
    return ModuleAlgebra(std::move(s));
}

// ---------------------------------------------------------------- tensor algebras

namespace {

std::shared_ptr<WordCore> make_tensor_core(std::shared_ptr<const QGroup> ctx, int maxdeg,
                                           bool star, int cutoff) {
    auto core = std::make_shared<WordCore>();
    core->ctx = ctx;
    core->n = ctx->n();
    core->ell = ctx->ell();
    core->wo = ctx->working_order();
    core->maxdeg = maxdeg;
    core->star = star;
    core->cutoff = cutoff;
    return core;
}

}  // namespace

ModuleAlgebra tensor_algebra(const ModuleAlgebra& v, int maxdeg) {
    if (v.kind() != "natural")
        throw std::invalid_argument("tensor_algebra expects the natural module");
    if (maxdeg < 1) throw std::invalid_argument("tensor_algebra: maxdeg must be >= 1");
    return finish_word_algebra(make_tensor_core(v.context(), maxdeg, false, 0), "tensor");
}

ModuleAlgebra truncate_ideal(const ModuleAlgebra& tensor, int p) {
    if (tensor.kind() != "tensor" && tensor.kind() != "tensor_star")
        throw std::invalid_argument("truncate_ideal expects a tensor algebra");
    if (p < 2) throw std::invalid_argument("truncate_ideal: p must be >= 2");
    bool star = tensor.kind() == "tensor_star";
    return finish_word_algebra(make_tensor_core(tensor.context(), p - 1, star, p),
                               star ? "tensor_trunc_star" : "tensor_trunc");
}

// ---------------------------------------------------------------- quotients

namespace {

void require_downup_params(const QGroupParams& p, const char* who) {
    long a = ((p.y % p.ell) + p.ell) % p.ell;
    long b = ((p.z % p.ell) + p.ell) % p.ell;
    bool ok = p.ell == 3 && ((a == 1 && b == 2) || (a == 2 && b == 1));
    if (!ok)
        throw std::invalid_argument(std::string(who) +
                                    " requires ell=3 with {r,s} = {q, q^-1} (y,z = 1,2)");
}

std::map<std::vector<int>, CycScalar> word_elem(
    std::initializer_list<std::pair<std::vector<int>, CycScalar>> terms) {
    std::map<std::vector<int>, CycScalar> out;
    for (auto& [w, c] : terms) {
        auto it = out.find(w);
        if (it == out.end())
            out.emplace(w, c);
        else
            it->second += c;
    }
    return out;
}

// verify b.g stays inside the span of the generators' degree-3 slice
void verify_ideal_stable(const WordCore& core,
                         const std::vector<std::map<std::vector<int>, CycScalar>>& gens,
                         const char* who) {
    const auto& sl = *core.slices[3];
    std::vector<GenSymbol> letters;
    for (int i = 1; i <= core.n - 1; ++i) {
        letters.push_back(GenSymbol::e(i));
        letters.push_back(GenSymbol::f(i));
        letters.push_back(GenSymbol::w(i));
        letters.push_back(GenSymbol::w(i, -1));
        letters.push_back(GenSymbol::wp(i));
        letters.push_back(GenSymbol::wp(i, -1));
    }
    std::vector<int> nogroup;
    for (const auto& gen : gens) {
        for (const auto& g : letters) {
            // image of the generator under g, as a vector over degree-3 words
            std::map<std::vector<int>, LaurentScalar> img;
            for (const auto& [w, c] : gen) {
                for (const auto& t : core.act_gen_raw(g, w, nogroup)) {
                    auto it = img.find(t.atoms);
                    LaurentScalar add = t.coeff.scaled(c);
                    if (it == img.end())
                        img.emplace(t.atoms, add);
                    else
                        it->second += add;
                }
            }
            // each t-layer of the image must lie in the degree-3 slice
            std::map<int, std::vector<CycScalar>> layers;
            for (const auto& [w, c] : img) {
                for (const auto& [k, cv] : c.terms()) {
                    auto [it, fresh] = layers.try_emplace(
                        k, std::vector<CycScalar>(sl.words.size(), CycScalar::zero(core.ell)));
                    it->second[sl.col.at(w)] += cv;
                }
            }
            for (auto& [k, vec] : layers) {
                std::vector<CycScalar> res = sl.span->residue(std::move(vec));
                for (const auto& x : res)
                    if (!x.is_zero())
                        throw std::domain_error(
                            std::string(who) + ": ideal is not stable under the action (letter " +
                            g.to_string() + ", t-degree " + std::to_string(k) + ")");
            }
        }
    }
}

std::vector<std::map<std::vector<int>, CycScalar>> downup_generators(const QGroup& ctx) {
    const CycScalar s = ctx.s();
    const CycScalar s2 = s * s;
    const CycScalar one = CycScalar::one(ctx.ell());
    return {
        word_elem({{{1, 1, 2}, one}, {{1, 2, 1}, s}, {{2, 1, 1}, s2}}),
        word_elem({{{1, 2, 2}, one}, {{2, 1, 2}, s}, {{2, 2, 1}, s2}}),
    };
}

}  // namespace

ModuleAlgebra downup_quotient(std::shared_ptr<const QGroup> ctx, int maxdeg) {
    if (ctx->n() != 2) throw std::invalid_argument("downup_quotient requires n=2");
    require_downup_params(ctx->params(), "downup_quotient");
    if (maxdeg < 3) throw std::invalid_argument("downup_quotient: maxdeg must be >= 3");
    auto core = make_tensor_core(ctx, maxdeg, false, 0);
    auto gens = downup_generators(*ctx);
    build_quotient_slices(*core, gens);
    verify_ideal_stable(*core, gens, "downup_quotient");
    return finish_word_algebra(core, "downup");
}

// ---------------------------------------------------------------- Y-quotient

namespace {

// the spanning elements y(i,j,k), i <= j <= k, of the degree-3 submodule
std::map<std::vector<int>, CycScalar> y_element(const QGroup& ctx, int i, int j, int k) {
    const CycScalar s = ctx.s();
    const CycScalar s2 = s * s;
    const CycScalar one = CycScalar::one(ctx.ell());
    if (i == j && j == k) return {};
    if (i < j && j < k) {
        return word_elem({{{i, j, k}, one},
                          {{j, i, k}, s},
                          {{i, k, j}, s},
                          {{j, k, i}, s2},
                          {{k, i, j}, s2},
                          {{k, j, i}, one}});
    }
    if (i == j && j < k) {
        return word_elem({{{i, i, k}, one}, {{i, k, i}, s}, {{k, i, i}, s2}});
    }
    if (i < j && j == k) {
        return word_elem({{{i, k, k}, one}, {{k, i, k}, s}, {{k, k, i}, s2}});
    }
    throw std::invalid_argument("y_element: indices must be sorted");
}

// verify the printed e_t/f_t/omega action tables on the y-spanning set
void verify_y_tables(const WordCore& core) {
    const QGroup& ctx = *core.ctx;
    const int n = core.n;
    std::vector<int> nogroup;

    auto as_vec = [&](const std::map<std::vector<int>, CycScalar>& elem) {
        std::map<std::vector<int>, LaurentScalar> out;
        for (const auto& [w, c] : elem) out.emplace(w, LaurentScalar::from_cyc(c, core.wo));
        return out;
    };
    auto act_elem = [&](GenSymbol g, const std::map<std::vector<int>, CycScalar>& elem) {
        std::map<std::vector<int>, LaurentScalar> out;
        for (const auto& [w, c] : elem) {
            for (const auto& t : core.act_gen_raw(g, w, nogroup)) {
                LaurentScalar add = t.coeff.scaled(c);
                auto it = out.find(t.atoms);
                if (it == out.end())
                    out.emplace(t.atoms, add);
                else {
                    it->second += add;
                    if (it->second.is_zero()) out.erase(it);
                }
            }
        }
        return out;
    };
    auto scaled = [&](std::map<std::vector<int>, LaurentScalar> m, const CycScalar& c) {
        for (auto it = m.begin(); it != m.end();) {
            it->second = it->second.scaled(c);
            if (it->second.is_zero())
                it = m.erase(it);
            else
                ++it;
        }
        return m;
    };

    std::vector<std::array<int, 3>> triples;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            for (int k = j; k <= n; ++k)
                if (!(i == j && j == k)) triples.push_back({i, j, k});

    const CycScalar one = CycScalar::one(core.ell);
    for (const auto& [i, j, k] : triples) {
        auto y = y_element(ctx, i, j, k);
        for (int t = 1; t <= n - 1; ++t) {
            // omega_t and omega'_t scale by the eps-weights of eps_i+eps_j+eps_k
            int count_t = (i == t) + (j == t) + (k == t);
            int count_t1 = (i == t + 1) + (j == t + 1) + (k == t + 1);
            CycScalar womega = ctx.r().pow(count_t) * ctx.s().pow(count_t1);
            CycScalar womegap = ctx.r().pow(count_t1) * ctx.s().pow(count_t);
            if (act_elem(GenSymbol::w(t), y) != scaled(as_vec(y), womega))
                throw std::domain_error("y_submodule_quotient: omega table mismatch");
            if (act_elem(GenSymbol::wp(t), y) != scaled(as_vec(y), womegap))
                throw std::domain_error("y_submodule_quotient: omega' table mismatch");

            // e_t table
            std::map<std::vector<int>, CycScalar> expected;
            if (i == t + 1 && ((t + 1 <= j && j < k) || (t + 1 < j && j == k))) {
                expected = y_element(ctx, t, j, k);
            } else if (j == t + 1 && i < t + 1 && t + 1 <= k) {
                expected = y_element(ctx, i, t, k);
                if (i == t)
                    for (auto& [w, c] : expected) c = -c;
            } else if (k == t + 1 && i <= j && j <= t) {
                expected = y_element(ctx, i, j, t);
                if (j == t)
                    for (auto& [w, c] : expected) c = -c;
            }
            if (act_elem(GenSymbol::e(t), y) != as_vec(expected))
                throw std::domain_error("y_submodule_quotient: e table mismatch at y(" +
                                        std::to_string(i) + "," + std::to_string(j) + "," +
                                        std::to_string(k) + "), t=" + std::to_string(t));

            // f_t table
            std::map<std::vector<int>, CycScalar> fexpected;
            if (i == t && t < j && j <= k) {
                fexpected = y_element(ctx, t + 1, j, k);
                if (j == t + 1)
                    for (auto& [w, c] : fexpected) c = -c;
            } else if (j == t && i <= t && t < k) {
                fexpected = y_element(ctx, i, t + 1, k);
                if (k == t + 1)
                    for (auto& [w, c] : fexpected) c = -c;
            } else if (k == t && ((i <= j && j < t) || (i < j && j == t))) {
                fexpected = y_element(ctx, i, j, t + 1);
            }
            if (act_elem(GenSymbol::f(t), y) != as_vec(fexpected))
                throw std::domain_error("y_submodule_quotient: f table mismatch at y(" +
                                        std::to_string(i) + "," + std::to_string(j) + "," +
                                        std::to_string(k) + "), t=" + std::to_string(t));
        }
        (void)one;
    }
}

}  // namespace

ModuleAlgebra y_submodule_quotient(std::shared_ptr<const QGroup> ctx, int maxdeg) {
    if (ctx->n() < 3) throw std::invalid_argument("y_submodule_quotient requires n >= 3");
    require_downup_params(ctx->params(), "y_submodule_quotient");
    if (maxdeg < 3) throw std::invalid_argument("y_submodule_quotient: maxdeg must be >= 3");
    auto core = make_tensor_core(ctx, maxdeg, false, 0);
    std::vector<std::map<std::vector<int>, CycScalar>> gens;
    for (int i = 1; i <= ctx->n(); ++i)
        for (int j = i; j <= ctx->n(); ++j)
            for (int k = j; k <= ctx->n(); ++k) {
                if (i == j && j == k) continue;
                gens.push_back(y_element(*ctx, i, j, k));
            }
    build_quotient_slices(*core, gens);
    verify_y_tables(*core);
    verify_ideal_stable(*core, gens, "y_submodule_quotient");
    return finish_word_algebra(core, "ysub");
}

// ---------------------------------------------------------------- smash product

ModuleAlgebra smash_product(std::shared_ptr<const QGroup> ctx, std::vector<CycScalar> beta,
                            int maxdeg) {
    if (static_cast<int>(beta.size()) != ctx->n() - 1)
        throw std::invalid_argument("smash_product: need n-1 beta scalars");
    for (const auto& b : beta) {
        if (b.order() != ctx->ell())
            throw std::invalid_argument("smash_product: beta scalar order mismatch");
        if (!b.pow(ctx->ell()).is_one())
            throw std::invalid_argument("smash_product: beta values must be ell-th roots of unity");
    }
    if (maxdeg < 1) throw std::invalid_argument("smash_product: maxdeg must be >= 1");
    auto core = make_tensor_core(ctx, maxdeg, false, 0);
    core->smash = true;
    core->beta = std::move(beta);
    return finish_word_algebra(core, "smash");
}

// ---------------------------------------------------------------- star action

ModuleAlgebra star_action(const ModuleAlgebra& a) {
    const auto& ctx = a.context();
    const std::string& kind = a.kind();
    if (kind == "smash" || kind.find("star") != std::string::npos)
        throw std::invalid_argument("star_action: the action already carries t-powers");
    if (kind == "tensor") {
        return finish_word_algebra(make_tensor_core(ctx, a.maxdeg(), true, 0), "tensor_star");
    }
    if (kind == "tensor_trunc") {
        int p = a.maxdeg() + 1;
        return finish_word_algebra(make_tensor_core(ctx, p - 1, true, p), "tensor_trunc_star");
    }
    if (kind == "downup" || kind == "ysub") {
        auto core = make_tensor_core(ctx, a.maxdeg(), true, 0);
        std::vector<std::map<std::vector<int>, CycScalar>> gens;
        if (kind == "downup") {
            gens = downup_generators(*ctx);
        } else {
            for (int i = 1; i <= ctx->n(); ++i)
                for (int j = i; j <= ctx->n(); ++j)
                    for (int k = j; k <= ctx->n(); ++k) {
                        if (i == j && j == k) continue;
                        gens.push_back(y_element(*ctx, i, j, k));
                    }
        }
        build_quotient_slices(*core, gens);
        verify_ideal_stable(*core, gens, kind.c_str());
        return finish_word_algebra(core, kind + "_star");
    }
    if (kind == "qplane" || kind == "natural") {
        // label-level rescale: every generator action gains t^{deg}, with
        // deg e = deg w = deg w' = 1 and deg f = 0
        auto base = std::make_shared<ModuleAlgebra>(
            kind == "qplane" ? quantum_plane(ctx, a.maxdeg()) : natural_module(ctx));
        ModuleAlgebra::Setup s;
        s.kind = kind + "_star";
        s.ctx = ctx;
        s.maxdeg = a.maxdeg();
        for (int i = 0; i < base->size(); ++i) {
            s.labels.push_back(base->label(i));
            s.grades.push_back(base->grade(i));
        }
        s.unit = base->has_product() ? base->unit() : -1;
        if (base->has_product())
            s.product_rule = [base](const ModuleAlgebra&, int x, int y) {
                return base->product(x, y);
            };
        s.action_rule = [base](const ModuleAlgebra&, GenSymbol g, int label) {
            int tshift = (g.kind == GenKind::F) ? 0 : (g.group_like() ? g.power_sign : 1);
            ModuleElement plain = base->act_gen(g, label);
            ModuleElement out;
            for (const auto& [l, c] : plain.terms()) out.add_term(l, c.shifted(tshift));
            return out;
        };
        const long ell = ctx->ell();
        const int wo = ctx->working_order();
        LaurentScalar tchar = LaurentScalar::term(CycScalar::one(ell), 1, wo);
        for (int i = 0; i < base->size(); ++i) {
            const WeightChar& w = base->label_weight(i);
            std::vector<LaurentScalar> vw, vwp;
            for (int k = 1; k <= ctx->n() - 1; ++k) {
                vw.push_back(w.w(k) * tchar);
                vwp.push_back(w.wp(k) * tchar);
            }
            s.weights.emplace_back(WeightChar(std::move(vw), std::move(vwp)));
        }
        return ModuleAlgebra(std::move(s));
    }
    throw std::invalid_argument("star_action: unsupported algebra kind " + kind);
}

// ---------------------------------------------------------------- checks

CheckReport check_module_algebra(const ModuleAlgebra& a, int degcap) {
    CheckReport report;
    const auto& ctx = a.context();
    const long ell = ctx->ell();
    const int wo = ctx->working_order();
    LaurentScalar one = LaurentScalar::one(ell, wo);

    std::vector<GenSymbol> gens;
    for (int i = 1; i <= ctx->n() - 1; ++i) {
        gens.push_back(GenSymbol::e(i));
        gens.push_back(GenSymbol::f(i));
        gens.push_back(GenSymbol::w(i));
        gens.push_back(GenSymbol::w(i, -1));
        gens.push_back(GenSymbol::wp(i));
        gens.push_back(GenSymbol::wp(i, -1));
    }

    if (!a.has_product()) {
        report.add("modalg", a.kind() + ": module only, product axioms vacuous", true);
        return report;
    }

    for (const auto& g : gens) {
        // (modalg1): b.1 = eps(b) 1
        ModuleElement lhs = a.act_gen(g, a.unit());
        ModuleElement rhs = g.group_like() ? a.unit_element() : a.zero();
        bool ok1 = lhs == rhs;
        report.add("modalg1", g.to_string(), ok1,
                   ok1 ? "" : "b.1 != eps(b)1 for " + g.to_string());

        // (modalg2): b.(aa') = sum (b1.a)(b2.a')
        bool ok2 = true;
        std::string witness;
        for (int x = 0; x < a.size() && ok2; ++x) {
            for (int y = 0; y < a.size() && ok2; ++y) {
                if (a.grade(x) + a.grade(y) > degcap) continue;
                ModuleElement prod;
                try {
                    prod = a.product(x, y);
                } catch (const degree_overflow_error&) {
                    continue;
                }
                ModuleElement left = a.act_gen(g, prod);
                ModuleElement right;
                if (g.kind == GenKind::E) {
                    right = a.mul(a.act_gen(g, a.basis(x)), a.basis(y)) +
                            a.mul(a.act_gen(GenSymbol::w(g.index), a.basis(x)),
                                  a.act_gen(g, a.basis(y)));
                } else if (g.kind == GenKind::F) {
                    right = a.mul(a.basis(x), a.act_gen(g, a.basis(y))) +
                            a.mul(a.act_gen(g, a.basis(x)),
                                  a.act_gen(GenSymbol::wp(g.index), a.basis(y)));
                } else {
                    right = a.mul(a.act_gen(g, a.basis(x)), a.act_gen(g, a.basis(y)));
                }
                if (left != right) {
                    ok2 = false;
                    witness = g.to_string() + " at (" + a.label(x) + ", " + a.label(y) + ")";
                }
            }
        }
        report.add("modalg2", g.to_string(), ok2, witness);
    }
    return report;
}

namespace {

struct EigenBlock {
    // vectors with t-free coordinates over one grade slice
    std::vector<std::vector<CycScalar>> vecs;
    std::vector<LaurentScalar> eigenvalues;  // per operator processed so far
};

}  // namespace

static std::vector<std::pair<WeightChar, std::vector<ModuleElement>>> eigen_decompose(
    const ModuleAlgebra& a, CheckReport* report) {
    const auto& ctx = a.context();
    const long ell = ctx->ell();
    const int wo = ctx->working_order();
    const int rank = ctx->n() - 1;

    std::vector<GenSymbol> ops;
    for (int i = 1; i <= rank; ++i) {
        ops.push_back(GenSymbol::w(i));
        ops.push_back(GenSymbol::wp(i));
    }

    // group labels by grade
    std::map<int, std::vector<int>> slices;
    for (int l = 0; l < a.size(); ++l) slices[a.grade(l)].push_back(l);

    std::vector<std::pair<WeightChar, std::vector<ModuleElement>>> out;
    for (const auto& [grade, labels] : slices) {
        const int dim = static_cast<int>(labels.size());
        std::map<int, int> pos;
        for (int p = 0; p < dim; ++p) pos.emplace(labels[p], p);

        EigenBlock start;
        for (int p = 0; p < dim; ++p) {
            std::vector<CycScalar> v(dim, CycScalar::zero(ell));
            v[p] = CycScalar::one(ell);
            start.vecs.push_back(std::move(v));
        }
        std::vector<EigenBlock> blocks{std::move(start)};

        for (const auto& op : ops) {
            // ambient matrix of the operator on this slice; entries must share
            // one t-degree, which is stripped before the exact eigen split
            CycMatrix amb(dim, dim, ell);
            std::optional<int> tdeg;
            bool bad = false;
            for (int p = 0; p < dim && !bad; ++p) {
                ModuleElement img = a.act_gen(op, labels[p]);
                for (const auto& [l, c] : img.terms()) {
                    if (c.terms().size() != 1) {
                        bad = true;
                        break;
                    }
                    int k = c.lowest_exponent();
                    if (!tdeg) tdeg = k;
                    if (*tdeg != k) {
                        bad = true;
                        break;
                    }
                    amb.at(pos.at(l), p) += c.coeff(k);
                }
            }
            if (bad) {
                if (report)
                    report->add("N1", "grade " + std::to_string(grade), false,
                                "operator " + op.to_string() + " is not t-homogeneous");
                blocks.clear();
                break;
            }
            if (!tdeg) tdeg = 0;

            std::vector<EigenBlock> next;
            for (auto& blk : blocks) {
                int d = static_cast<int>(blk.vecs.size());
                int found = 0;
                for (long j = 0; j < ell; ++j) {
                    CycScalar lam = CycScalar::theta_power(ell, j);
                    // kernel of (amb - lam) restricted to span(blk)
                    CycMatrix m(dim, d, ell);
                    for (int cidx = 0; cidx < d; ++cidx) {
                        // (amb - lam) * vec
                        for (int rr = 0; rr < dim; ++rr) {
                            CycScalar acc = CycScalar::zero(ell);
                            for (int k = 0; k < dim; ++k) {
                                if (amb.at(rr, k).is_zero() || blk.vecs[cidx][k].is_zero())
                                    continue;
                                acc += amb.at(rr, k) * blk.vecs[cidx][k];
                            }
                            acc -= lam * blk.vecs[cidx][rr];
                            m.at(rr, cidx) = acc;
                        }
                    }
                    auto ker = m.kernel();
                    if (ker.empty()) continue;
                    EigenBlock nb;
                    nb.eigenvalues = blk.eigenvalues;
                    nb.eigenvalues.push_back(LaurentScalar::term(lam, *tdeg, wo));
                    for (const auto& x : ker) {
                        std::vector<CycScalar> v(dim, CycScalar::zero(ell));
                        for (int cidx = 0; cidx < d; ++cidx) {
                            if (x[cidx].is_zero()) continue;
                            for (int k = 0; k < dim; ++k) v[k] += x[cidx] * blk.vecs[cidx][k];
                        }
                        nb.vecs.push_back(std::move(v));
                    }
                    found += static_cast<int>(nb.vecs.size());
                    next.push_back(std::move(nb));
                }
                if (found != d) {
                    if (report)
                        report->add("N1", "grade " + std::to_string(grade), false,
                                    "operator " + op.to_string() +
                                        " is not semisimple over Q(theta) on this slice");
                    next.clear();
                    break;
                }
            }
            blocks = std::move(next);
            if (blocks.empty()) break;
        }

        for (const auto& blk : blocks) {
            std::vector<LaurentScalar> vw, vwp;
            for (int i = 0; i < rank; ++i) {
                vw.push_back(blk.eigenvalues[2 * i]);
                vwp.push_back(blk.eigenvalues[2 * i + 1]);
            }
            WeightChar wchar(std::move(vw), std::move(vwp));
            std::vector<ModuleElement> vecs;
            for (const auto& v : blk.vecs) {
                ModuleElement m;
                for (int k = 0; k < dim; ++k) {
                    if (!v[k].is_zero())
                        m.add_term(labels[k], LaurentScalar::from_cyc(v[k], wo));
                }
                vecs.push_back(std::move(m));
            }
            out.emplace_back(std::move(wchar), std::move(vecs));
        }
        if (report && !blocks.empty())
            report->add("N1", "grade " + std::to_string(grade), true);
    }
    return out;
}

CheckReport check_category_N(const ModuleAlgebra& a) {
    CheckReport report;
    const auto& ctx = a.context();
    (void)eigen_decompose(a, &report);

    // (N2): all E_{i,j}^ell and F_{i,j}^ell annihilate
    for (int i = 1; i <= ctx->n() - 1; ++i) {
        for (int j = 1; j <= i; ++j) {
            NCPoly epow = NCPoly::unit(ctx->ell(), ctx->working_order());
            NCPoly fpow = epow;
            for (long k = 0; k < ctx->ell(); ++k) {
                epow = epow * ctx->root_vector_free(GenKind::E, i, j);
                fpow = fpow * ctx->root_vector_free(GenKind::F, i, j);
            }
            bool oke = true, okf = true;
            std::string we, wf;
            for (int l = 0; l < a.size(); ++l) {
                if (oke && !a.act_poly(epow, a.basis(l)).is_zero()) {
                    oke = false;
                    we = a.label(l);
                }
                if (okf && !a.act_poly(fpow, a.basis(l)).is_zero()) {
                    okf = false;
                    wf = a.label(l);
                }
            }
            std::string root = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            report.add("N2", "E" + root + "^ell", oke, we);
            report.add("N2", "F" + root + "^ell", okf, wf);
        }
    }
    return report;
}

std::map<std::string, std::vector<ModuleElement>> weight_decompose(const ModuleAlgebra& a) {
    std::map<std::string, std::vector<ModuleElement>> out;
    for (auto& [wchar, vecs] : eigen_decompose(a, nullptr)) {
        auto& bucket = out[wchar.to_string()];
        bucket.insert(bucket.end(), vecs.begin(), vecs.end());
    }
    return out;
}

}  // namespace qdeform
