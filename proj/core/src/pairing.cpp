#include "qdeform/pairing.hpp"

#include <gmpxx.h>

#include <sstream>

namespace qdeform {

bool check_relprime(int n, long y, long z, long ell) {
    mpz_class form = 0;
    mpz_class ypow, zpow;
    for (int k = 0; k <= n - 1; ++k) {
        mpz_ui_pow_ui(ypow.get_mpz_t(), static_cast<unsigned long>(y),
                      static_cast<unsigned long>(n - 1 - k));
        mpz_ui_pow_ui(zpow.get_mpz_t(), static_cast<unsigned long>(z),
                      static_cast<unsigned long>(k));
        mpz_class term = ypow * zpow;
        form += (k % 2 == 0) ? term : -term;
    }
    mpz_class g = gcd(form, mpz_class(ell));
    return g == 1;
}

namespace {

// free coproduct of a word: list of (left, right) splittings, coefficient 1
// on every part since the generator coproducts have unit coefficients
std::vector<std::pair<Word, Word>> delta_word(const Word& w) {
    std::vector<std::pair<Word, Word>> parts{{Word{}, Word{}}};
    for (const GenSymbol& g : w.letters) {
        std::vector<std::pair<Word, Word>> next;
        next.reserve(parts.size() * 2);
        for (const auto& [l, r] : parts) {
            if (g.kind == GenKind::E) {
                auto p1 = std::make_pair(l, r);
                p1.first.letters.push_back(g);
                next.push_back(std::move(p1));
                auto p2 = std::make_pair(l, r);
                p2.first.letters.push_back(GenSymbol::w(g.index));
                p2.second.letters.push_back(g);
                next.push_back(std::move(p2));
            } else if (g.kind == GenKind::F) {
                auto p1 = std::make_pair(l, r);
                p1.second.letters.push_back(g);
                next.push_back(std::move(p1));
                auto p2 = std::make_pair(l, r);
                p2.first.letters.push_back(g);
                p2.second.letters.push_back(GenSymbol::wp(g.index));
                next.push_back(std::move(p2));
            } else {
                auto p1 = std::make_pair(l, r);
                p1.first.letters.push_back(g);
                p1.second.letters.push_back(g);
                next.push_back(std::move(p1));
            }
        }
        parts = std::move(next);
    }
    return parts;
}

bool word_is_minus_side(const Word& w) {
    for (const GenSymbol& g : w.letters)
        if (g.kind == GenKind::E || g.kind == GenKind::W) return false;
    return true;
}

bool word_is_plus_side(const Word& w) {
    for (const GenSymbol& g : w.letters)
        if (g.kind == GenKind::F || g.kind == GenKind::Wp) return false;
    return true;
}

bool word_counit_nonzero(const Word& w) {
    for (const GenSymbol& g : w.letters)
        if (!g.group_like()) return false;
    return true;
}

}  // namespace

CycScalar Pairing::omega_pair(int i, int j) const {
    // (omega'_i | omega_j) = r^<eps_j, alpha_i> s^<eps_{j+1}, alpha_i>
    return ctx_->r().pow(QGroup::eps_alpha(j, i)) * ctx_->s().pow(QGroup::eps_alpha(j + 1, i));
}

CycScalar Pairing::pair_letters(const GenSymbol& y, const GenSymbol& x) const {
    const long ell = ctx_->ell();
    if (y.kind == GenKind::F && x.kind == GenKind::E) {
        if (y.index != x.index) return CycScalar::zero(ell);
        return (ctx_->s() - ctx_->r()).inverse();
    }
    if (y.kind == GenKind::Wp && x.kind == GenKind::W) {
        return omega_pair(y.index, x.index).pow(static_cast<long>(y.power_sign) * x.power_sign);
    }
    return CycScalar::zero(ell);
}

CycScalar Pairing::pair_words(const Word& y, const Word& x) const {
    const long ell = ctx_->ell();
    if (x.empty()) return word_counit_nonzero(y) ? CycScalar::one(ell) : CycScalar::zero(ell);
    if (y.empty()) return word_counit_nonzero(x) ? CycScalar::one(ell) : CycScalar::zero(ell);
    // graded pairing: mismatched degrees pair to zero
    if (word_degree(y, ctx_->n()) + word_degree(x, ctx_->n()) != RootVector::zero(ctx_->n()))
        return CycScalar::zero(ell);

    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find({y, x});
        if (it != memo_.end()) return it->second;
    }

    CycScalar out = CycScalar::zero(ell);
    if (x.size() >= 2) {
        // (y | bc) = sum (y_(2) | b)(y_(1) | c) with b the first letter
        Word b(std::vector<GenSymbol>{x.letters.front()});
        Word c(std::vector<GenSymbol>(x.letters.begin() + 1, x.letters.end()));
        for (const auto& [y1, y2] : delta_word(y)) {
            CycScalar left = pair_words(y2, b);
            if (left.is_zero()) continue;
            out += left * pair_words(y1, c);
        }
    } else if (y.size() >= 2) {
        // (b'c' | x) = sum (b' | x_(1))(c' | x_(2)) with b' the first letter
        Word bp(std::vector<GenSymbol>{y.letters.front()});
        Word cp(std::vector<GenSymbol>(y.letters.begin() + 1, y.letters.end()));
        for (const auto& [x1, x2] : delta_word(x)) {
            CycScalar left = pair_words(bp, x1);
            if (left.is_zero()) continue;
            out += left * pair_words(cp, x2);
        }
    } else {
        out = pair_letters(y.letters[0], x.letters[0]);
    }

    std::lock_guard<std::mutex> lock(memo_mutex_);
    memo_.emplace(std::make_pair(y, x), out);
    return out;
}

CycScalar Pairing::pair_poly(const NCPoly& y, const NCPoly& x) const {
    CycScalar out = CycScalar::zero(ctx_->ell());
    for (const auto& [wy, cy] : y.terms()) {
        if (!word_is_minus_side(wy))
            throw std::invalid_argument("pair: left argument must lie in U^{<=0}");
        for (const auto& [wx, cx] : x.terms()) {
            if (!word_is_plus_side(wx))
                throw std::invalid_argument("pair: right argument must lie in U^{>=0}");
            CycScalar v = pair_words(wy, wx);
            if (!v.is_zero()) out += cy.cyc_value() * cx.cyc_value() * v;
        }
    }
    return out;
}

CycScalar Pairing::pair(const AlgebraElement& yv, const AlgebraElement& xv) const {
    NCPoly fy(ctx_->ell(), ctx_->working_order());
    NCPoly fx(ctx_->ell(), ctx_->working_order());
    for (const auto& [m, c] : yv.terms()) {
        if (!m.e_exp.empty())
            throw std::invalid_argument("pair: left argument must lie in U^{<=0}");
        for (int k : m.w_exp)
            if (k) throw std::invalid_argument("pair: left argument must lie in U^{<=0}");
        fy += ctx_->expand(m).scaled(c);
    }
    for (const auto& [m, c] : xv.terms()) {
        if (!m.f_exp.empty())
            throw std::invalid_argument("pair: right argument must lie in U^{>=0}");
        for (int k : m.wp_exp)
            if (k) throw std::invalid_argument("pair: right argument must lie in U^{>=0}");
        fx += ctx_->expand(m).scaled(c);
    }
    return pair_poly(fy, fx);
}

GramMatrix Pairing::gram_plus(const RootVector& zeta) const {
    GramMatrix g;
    g.degree = zeta;
    g.minus_basis = ctx_->pbw_basis_minus(zeta);
    g.plus_basis = ctx_->pbw_basis_plus(zeta);
    int nrows = static_cast<int>(g.minus_basis.size());
    int ncols = static_cast<int>(g.plus_basis.size());
    g.entries = CycMatrix(nrows, ncols, ctx_->ell());
    std::vector<NCPoly> plus_free;
    plus_free.reserve(ncols);
    for (const auto& m : g.plus_basis) plus_free.push_back(ctx_->expand(m));
    for (int a = 0; a < nrows; ++a) {
        NCPoly minus_free = ctx_->expand(g.minus_basis[a]);
        for (int b = 0; b < ncols; ++b) g.entries.at(a, b) = pair_poly(minus_free, plus_free[b]);
    }
    return g;
}

std::vector<AlgebraElement> Pairing::dual_basis_plus(const RootVector& zeta) const {
    GramMatrix g = gram_plus(zeta);
    auto inv = g.entries.inverse();
    if (!inv)
        throw std::domain_error("pairing is degenerate in degree " + zeta.to_string() +
                                " (Gram matrix singular)");
    // v_k = sum_a inv[k][a] * minus_basis[a] satisfies (v_k | u_j) = delta
    std::vector<AlgebraElement> duals;
    int q = static_cast<int>(g.minus_basis.size());
    for (int k = 0; k < q; ++k) {
        AlgebraElement v = ctx_->zero_element();
        for (int a = 0; a < q; ++a) {
            const CycScalar& c = inv->at(k, a);
            if (c.is_zero()) continue;
            v += ctx_->from_monomial(g.minus_basis[a], ctx_->laurent(c));
        }
        duals.push_back(std::move(v));
    }
    return duals;
}

std::map<std::vector<int>, AlgebraElement> Pairing::group_dual_basis() const {
    const int rank = ctx_->n() - 1;
    const long ell = ctx_->ell();
    // Omega in lex order of exponent vectors
    std::vector<std::vector<int>> omega;
    std::vector<int> a(rank, 0);
    while (true) {
        omega.push_back(a);
        int k = rank - 1;
        while (k >= 0) {
            if (a[k] + 1 < ell) {
                a[k]++;
                break;
            }
            a[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    int q = static_cast<int>(omega.size());
    CycMatrix p(q, q, ell);
    for (int b = 0; b < q; ++b) {
        for (int c = 0; c < q; ++c) {
            CycScalar v = CycScalar::one(ell);
            for (int i = 1; i <= rank; ++i) {
                for (int j = 1; j <= rank; ++j) {
                    long e = static_cast<long>(omega[b][i - 1]) * omega[c][j - 1];
                    if (e) v *= omega_pair(i, j).pow(e);
                }
            }
            p.at(b, c) = v;
        }
    }
    auto inv = p.inverse();
    if (!inv) throw std::domain_error("group character matrix is singular");
    std::map<std::vector<int>, AlgebraElement> out;
    std::vector<int> zero(rank, 0);
    for (int c = 0; c < q; ++c) {
        AlgebraElement star = ctx_->zero_element();
        for (int b = 0; b < q; ++b) {
            const CycScalar& coef = inv->at(c, b);
            if (coef.is_zero()) continue;
            star += ctx_->from_monomial(ctx_->group_monomial(zero, omega[b]),
                                        ctx_->laurent(coef));
        }
        out.emplace(omega[c], std::move(star));
    }
    return out;
}

CheckReport Pairing::radical_check() const {
    CheckReport report;
    const int rank = ctx_->n() - 1;
    const long ell = ctx_->ell();
    const int wo = ctx_->working_order();

    // group exponent vectors over [0, ell)
    std::vector<std::vector<int>> omega;
    {
        std::vector<int> a(rank, 0);
        while (true) {
            omega.push_back(a);
            int k = rank - 1;
            while (k >= 0) {
                if (a[k] + 1 < ell) {
                    a[k]++;
                    break;
                }
                a[k] = 0;
                --k;
            }
            if (k < 0) break;
        }
    }

    auto group_word = [&](GenKind kind, const std::vector<int>& exps) {
        Word w;
        for (int i = 0; i < rank; ++i)
            for (int k = 0; k < exps[i]; ++k)
                w.letters.push_back(kind == GenKind::W ? GenSymbol::w(i + 1)
                                                       : GenSymbol::wp(i + 1));
        return w;
    };

    // omega_i^ell - 1 against every omega'^b
    for (int i = 1; i <= rank; ++i) {
        NCPoly gen(ell, wo);
        Word power;
        for (long k = 0; k < ell; ++k) power.letters.push_back(GenSymbol::w(i));
        gen.add_term(power, LaurentScalar::one(ell, wo));
        gen -= NCPoly::unit(ell, wo);
        bool ok = true;
        std::string witness;
        for (const auto& b : omega) {
            NCPoly left = NCPoly::monomial(group_word(GenKind::Wp, b), LaurentScalar::one(ell, wo));
            CycScalar v = pair_poly(left, gen);
            if (!v.is_zero()) {
                ok = false;
                witness = "wp^" + RootVector(b).to_string();
                break;
            }
        }
        report.add("radical", "w" + std::to_string(i) + "^ell-1", ok, witness);
    }
    // (omega'_i)^ell - 1 on the left against every omega^a
    for (int i = 1; i <= rank; ++i) {
        NCPoly gen(ell, wo);
        Word power;
        for (long k = 0; k < ell; ++k) power.letters.push_back(GenSymbol::wp(i));
        gen.add_term(power, LaurentScalar::one(ell, wo));
        gen -= NCPoly::unit(ell, wo);
        bool ok = true;
        std::string witness;
        for (const auto& a : omega) {
            NCPoly right = NCPoly::monomial(group_word(GenKind::W, a), LaurentScalar::one(ell, wo));
            CycScalar v = pair_poly(gen, right);
            if (!v.is_zero()) {
                ok = false;
                witness = "w^" + RootVector(a).to_string();
                break;
            }
        }
        report.add("radical", "wp" + std::to_string(i) + "^ell-1", ok, witness);
    }

    // E_{i,j}^ell against every F-monomial (with omega' attachments) of
    // matching degree, and mirrored
    for (int i = 1; i <= rank; ++i) {
        for (int j = 1; j <= i; ++j) {
            RootVector deg = RootVector::zero(ctx_->n());
            for (int k = j; k <= i; ++k) deg.comp[k - 1] = static_cast<int>(ell);

            NCPoly epow = NCPoly::unit(ell, wo);
            NCPoly fpow = NCPoly::unit(ell, wo);
            for (long k = 0; k < ell; ++k) {
                epow = epow * ctx_->root_vector_free(GenKind::E, i, j);
                fpow = fpow * ctx_->root_vector_free(GenKind::F, i, j);
            }

            bool ok_e = true, ok_f = true;
            std::string wit_e, wit_f;
            for (const auto& fm : ctx_->pbw_monomials_unbounded(GenKind::F, deg)) {
                NCPoly ffree = ctx_->expand(fm);
                for (const auto& b : omega) {
                    NCPoly left =
                        ffree * NCPoly::monomial(group_word(GenKind::Wp, b),
                                                 LaurentScalar::one(ell, wo));
                    if (!pair_poly(left, epow).is_zero()) {
                        ok_e = false;
                        wit_e = fm.to_string() + "*wp^" + RootVector(b).to_string();
                        break;
                    }
                }
                if (!ok_e) break;
            }
            for (const auto& em : ctx_->pbw_monomials_unbounded(GenKind::E, deg)) {
                NCPoly efree = ctx_->expand(em);
                for (const auto& a : omega) {
                    NCPoly right =
                        efree * NCPoly::monomial(group_word(GenKind::W, a),
                                                 LaurentScalar::one(ell, wo));
                    if (!pair_poly(fpow, right).is_zero()) {
                        ok_f = false;
                        wit_f = em.to_string() + "*w^" + RootVector(a).to_string();
                        break;
                    }
                }
                if (!ok_f) break;
            }
            std::ostringstream root;
            root << "(" << i << "," << j << ")";
            report.add("radical", "E" + root.str() + "^ell", ok_e, wit_e);
            report.add("radical", "F" + root.str() + "^ell", ok_f, wit_f);
        }
    }
    return report;
}

}  // namespace qdeform
