#include "qdeform/deform.hpp"

#include <sstream>

namespace qdeform {

// ---------------------------------------------------------------- TensorSpace

int TensorSpace::dim() const {
    int d = 1;
    for (const auto& s : slots) d *= s->size();
    return d;
}

int TensorSpace::flat(const std::vector<int>& tuple) const {
    if (tuple.size() != slots.size()) throw std::invalid_argument("TensorSpace: arity mismatch");
    int idx = 0;
    for (size_t k = 0; k < slots.size(); ++k) {
        if (tuple[k] < 0 || tuple[k] >= slots[k]->size())
            throw std::out_of_range("TensorSpace: label out of range");
        idx = idx * slots[k]->size() + tuple[k];
    }
    return idx;
}

std::vector<int> TensorSpace::tuple(int flat) const {
    std::vector<int> out(slots.size());
    for (int k = static_cast<int>(slots.size()) - 1; k >= 0; --k) {
        out[k] = flat % slots[k]->size();
        flat /= slots[k]->size();
    }
    return out;
}

// ---------------------------------------------------------------- TensorOp

TensorOp::TensorOp(TensorSpace from, TensorSpace to, Fn fn)
    : from_(std::move(from)), to_(std::move(to)), fn_(std::move(fn)) {}

TensorOp::Column TensorOp::apply(int in) const {
    {
        std::lock_guard<std::mutex> lock(*mutex_);
        auto it = memo_->find(in);
        if (it != memo_->end()) return it->second;
    }
    Column out = fn_(in);
    std::lock_guard<std::mutex> lock(*mutex_);
    memo_->emplace(in, out);
    return out;
}

TensorOp TensorOp::identity(const TensorSpace& sp) {
    long ell = sp.slots[0]->context()->ell();
    int wo = sp.slots[0]->context()->working_order();
    return TensorOp(sp, sp, [ell, wo](int in) {
        Column col;
        col.emplace(in, LaurentScalar::one(ell, wo));
        return col;
    });
}

TensorOp TensorOp::diagonal(const TensorSpace& sp, std::function<LaurentScalar(int)> scale) {
    return TensorOp(sp, sp, [scale](int in) {
        Column col;
        LaurentScalar c = scale(in);
        if (!c.is_zero()) col.emplace(in, std::move(c));
        return col;
    });
}

TensorOp TensorOp::tau(const TensorSpace& sp, int i, int j) {
    TensorSpace to = sp;
    std::swap(to.slots[i], to.slots[j]);
    long ell = sp.slots[0]->context()->ell();
    int wo = sp.slots[0]->context()->working_order();
    return TensorOp(sp, to, [sp, to, i, j, ell, wo](int in) {
        std::vector<int> t = sp.tuple(in);
        std::swap(t[i], t[j]);
        Column col;
        col.emplace(to.flat(t), LaurentScalar::one(ell, wo));
        return col;
    });
}

TensorOp TensorOp::slot_act(const TensorSpace& sp, int slot, const AlgebraElement& x) {
    return TensorOp(sp, sp, [sp, slot, x](int in) {
        std::vector<int> t = sp.tuple(in);
        const ModuleAlgebra& m = *sp.slots[slot];
        ModuleElement img = m.act(x, m.basis(t[slot]));
        Column col;
        for (const auto& [l, c] : img.terms()) {
            std::vector<int> t2 = t;
            t2[slot] = l;
            col.emplace(sp.flat(t2), c);
        }
        return col;
    });
}

TensorOp TensorOp::pair_act(const TensorSpace& sp, int i, int j, const TensorElement& f2) {
    if (f2.arity() != 2) throw std::invalid_argument("pair_act: 2-tensor expected");
    return TensorOp(sp, sp, [sp, i, j, f2](int in) {
        std::vector<int> t = sp.tuple(in);
        const ModuleAlgebra& mi = *sp.slots[i];
        const ModuleAlgebra& mj = *sp.slots[j];
        const auto& ctx = *f2.context();
        Column col;
        for (const auto& [slots2, c] : f2.terms()) {
            ModuleElement left = mi.act_poly(ctx.expand(slots2[0]), mi.basis(t[i]));
            if (left.is_zero()) continue;
            ModuleElement right = mj.act_poly(ctx.expand(slots2[1]), mj.basis(t[j]));
            if (right.is_zero()) continue;
            for (const auto& [la, ca] : left.terms()) {
                for (const auto& [lb, cb] : right.terms()) {
                    std::vector<int> t2 = t;
                    t2[i] = la;
                    t2[j] = lb;
                    int out = sp.flat(t2);
                    LaurentScalar add = c * ca * cb;
                    if (add.is_zero()) continue;
                    auto it = col.find(out);
                    if (it == col.end()) {
                        col.emplace(out, std::move(add));
                    } else {
                        it->second += add;
                        if (it->second.is_zero()) col.erase(it);
                    }
                }
            }
        }
        return col;
    });
}

TensorOp TensorOp::after(const TensorOp& first) const {
    if (!(first.to_ == from_)) throw std::invalid_argument("TensorOp: space mismatch in compose");
    TensorOp self = *this;
    TensorOp f = first;
    return TensorOp(first.from_, to_, [self, f](int in) {
        Column mid = f.apply(in);
        Column out;
        for (const auto& [m, cm] : mid) {
            Column stage = self.apply(m);
            for (const auto& [o, co] : stage) {
                LaurentScalar add = cm * co;
                if (add.is_zero()) continue;
                auto it = out.find(o);
                if (it == out.end()) {
                    out.emplace(o, std::move(add));
                } else {
                    it->second += add;
                    if (it->second.is_zero()) out.erase(it);
                }
            }
        }
        return out;
    });
}

TensorOp TensorOp::operator+(const TensorOp& o) const {
    if (!(from_ == o.from_) || !(to_ == o.to_))
        throw std::invalid_argument("TensorOp: space mismatch in sum");
    TensorOp a = *this, b = o;
    return TensorOp(from_, to_, [a, b](int in) {
        Column out = a.apply(in);
        for (const auto& [k, c] : b.apply(in)) {
            auto it = out.find(k);
            if (it == out.end()) {
                out.emplace(k, c);
            } else {
                it->second += c;
                if (it->second.is_zero()) out.erase(it);
            }
        }
        return out;
    });
}

TensorOp TensorOp::scaled(const LaurentScalar& c) const {
    TensorOp a = *this;
    return TensorOp(from_, to_, [a, c](int in) {
        Column out;
        for (const auto& [k, v] : a.apply(in)) {
            LaurentScalar cv = v * c;
            if (!cv.is_zero()) out.emplace(k, std::move(cv));
        }
        return out;
    });
}

std::optional<int> TensorOp::first_difference(const TensorOp& a, const TensorOp& b,
                                              const std::vector<int>& inputs) {
    for (int in : inputs) {
        if (a.apply(in) != b.apply(in)) return in;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- f-tilde

TensorOp ftilde_op(const TensorSpace& sp, int i, int j, const Pairing& pairing) {
    const auto& mi = sp.slots[i];
    const auto& mj = sp.slots[j];
    if (!mi->has_weight_view() || !mj->has_weight_view())
        throw std::invalid_argument("ftilde: slot modules need the chi.lambda-hat weight view");
    WeightChar chi = mi->base_char();
    WeightChar psi = mj->base_char();
    auto pr = std::make_shared<Pairing>(pairing.context());
    return TensorOp::diagonal(sp, [sp, i, j, chi, psi, pr, mi, mj](int in) {
        std::vector<int> t = sp.tuple(in);
        return f_scalar(chi, psi, mi->label_lambda(t[i]), mj->label_lambda(t[j]), *pr);
    });
}

// ---------------------------------------------------------------- twist component ops

namespace {

// F as an operator on slots (i, j) of a space: sum of all components
TensorOp twist_op(const TensorSpace& sp, int i, int j, const TwistElement& f) {
    TensorElement flat = f.flatten();
    return TensorOp::pair_act(sp, i, j, flat);
}

TensorOp component_op(const TensorSpace& sp, int i, int j, const TwistElement& f,
                      const RootVector& zeta) {
    const TensorElement* comp = f.component(zeta);
    if (!comp) return TensorOp(sp, sp, [](int) { return TensorOp::Column{}; });
    return TensorOp::pair_act(sp, i, j, *comp);
}

// (Delta (x) id)(F) or (id (x) Delta)(F) as a 3-slot operator
TensorOp delta_twist_op(const TensorSpace& sp, const TwistElement& f, bool delta_on_left) {
    const auto& ctx = f.ctx;
    TensorOp acc(sp, sp, [](int) { return TensorOp::Column{}; });
    bool any = false;
    for (const auto& [zeta, comp] : f.components) {
        for (const auto& [slots2, c] : comp.terms()) {
            TensorElement delta =
                ctx->coproduct(ctx->from_monomial(delta_on_left ? slots2[0] : slots2[1]));
            AlgebraElement other = ctx->from_monomial(delta_on_left ? slots2[1] : slots2[0]);
            for (const auto& [dslots, dc] : delta.terms()) {
                TensorOp term =
                    delta_on_left
                        ? TensorOp::slot_act(sp, 2, other)
                              .after(TensorOp::slot_act(sp, 1, ctx->from_monomial(dslots[1])))
                              .after(TensorOp::slot_act(sp, 0, ctx->from_monomial(dslots[0])))
                        : TensorOp::slot_act(sp, 0, other)
                              .after(TensorOp::slot_act(sp, 1, ctx->from_monomial(dslots[0])))
                              .after(TensorOp::slot_act(sp, 2, ctx->from_monomial(dslots[1])));
                term = term.scaled(c * dc);
                acc = any ? acc + term : term;
                any = true;
            }
        }
    }
    return acc;
}

std::vector<int> inputs_with_grades(const TensorSpace& sp, int degcap) {
    std::vector<int> out;
    int d = sp.dim();
    for (int in = 0; in < d; ++in) {
        std::vector<int> t = sp.tuple(in);
        bool ok = true;
        for (size_t k = 0; k < t.size(); ++k) {
            if (sp.slots[k]->grade(t[k]) > degcap) ok = false;
        }
        if (ok) out.push_back(in);
    }
    return out;
}

std::string tuple_name(const TensorSpace& sp, int in) {
    std::vector<int> t = sp.tuple(in);
    std::string out = "(";
    for (size_t k = 0; k < t.size(); ++k) {
        if (k) out += ", ";
        out += sp.slots[k]->label(t[k]);
    }
    return out + ")";
}

std::vector<int> all_inputs(const TensorSpace& sp) {
    std::vector<int> out(sp.dim());
    for (int i = 0; i < sp.dim(); ++i) out[i] = i;
    return out;
}

}  // namespace

// ---------------------------------------------------------------- braiding

BraidingMap braiding(std::shared_ptr<const ModuleAlgebra> mprime,
                     std::shared_ptr<const ModuleAlgebra> m, const TwistElement& f,
                     const Pairing& pairing) {
    TensorSpace from{{mprime, m}};
    TensorOp tau = TensorOp::tau(from, 0, 1);
    const TensorSpace& swapped = tau.to();
    TensorOp ft = ftilde_op(swapped, 0, 1, pairing);
    TensorOp fop = twist_op(swapped, 0, 1, f);
    return BraidingMap{from, swapped, fop.after(ft).after(tau)};
}

CheckReport check_module_hom(const BraidingMap& b) {
    CheckReport report;
    const auto& ctx = b.from.slots[0]->context();
    std::vector<GenSymbol> gens;
    for (int i = 1; i <= ctx->n() - 1; ++i) {
        gens.push_back(GenSymbol::e(i));
        gens.push_back(GenSymbol::f(i));
        gens.push_back(GenSymbol::w(i));
        gens.push_back(GenSymbol::wp(i));
    }
    auto coprod_op = [&](const TensorSpace& sp, const GenSymbol& g) {
        // Delta(e) = e (x) 1 + w (x) e ; Delta(f) = 1 (x) f + f (x) w' ;
        // group-likes act diagonally on both slots
        AlgebraElement ge = ctx->normal_form(NCPoly::generator(g, ctx->ell(), ctx->working_order()));
        if (g.kind == GenKind::E) {
            AlgebraElement w = ctx->from_monomial(ctx->group_monomial(
                [&] {
                    std::vector<int> v(ctx->n() - 1, 0);
                    v[g.index - 1] = 1;
                    return v;
                }(),
                std::vector<int>(ctx->n() - 1, 0)));
            return TensorOp::slot_act(sp, 0, ge) +
                   TensorOp::slot_act(sp, 1, ge).after(TensorOp::slot_act(sp, 0, w));
        }
        if (g.kind == GenKind::F) {
            AlgebraElement wp = ctx->from_monomial(ctx->group_monomial(
                std::vector<int>(ctx->n() - 1, 0), [&] {
                    std::vector<int> v(ctx->n() - 1, 0);
                    v[g.index - 1] = 1;
                    return v;
                }()));
            return TensorOp::slot_act(sp, 1, ge) +
                   TensorOp::slot_act(sp, 1, wp).after(TensorOp::slot_act(sp, 0, ge));
        }
        return TensorOp::slot_act(sp, 1, ge).after(TensorOp::slot_act(sp, 0, ge));
    };

    std::vector<int> inputs = all_inputs(b.from);
    for (const auto& g : gens) {
        TensorOp lhs = b.op.after(coprod_op(b.from, g));
        TensorOp rhs = coprod_op(b.to, g).after(b.op);
        auto diff = TensorOp::first_difference(lhs, rhs, inputs);
        report.add("module-hom", g.to_string(), !diff,
                   diff ? "at " + tuple_name(b.from, *diff) : "");
    }
    return report;
}

namespace {

// R applied to adjacent slots (slot, slot+1) of a 3-fold space
TensorOp r_op3(const TensorSpace& sp, int slot, const TwistElement& f, const Pairing& pairing) {
    TensorOp tau = TensorOp::tau(sp, slot, slot + 1);
    const TensorSpace& swapped = tau.to();
    TensorOp ft = ftilde_op(swapped, slot, slot + 1, pairing);
    TensorOp fop = twist_op(swapped, slot, slot + 1, f);
    return fop.after(ft).after(tau);
}

}  // namespace

CheckReport check_qybe(std::shared_ptr<const ModuleAlgebra> m,
                       std::shared_ptr<const ModuleAlgebra> mp,
                       std::shared_ptr<const ModuleAlgebra> mpp, const TwistElement& f,
                       const Pairing& pairing) {
    CheckReport report;
    TensorSpace sp{{m, mp, mpp}};
    // R12 R23 R12
    TensorOp a1 = r_op3(sp, 0, f, pairing);
    TensorOp a2 = r_op3(a1.to(), 1, f, pairing);
    TensorOp a3 = r_op3(a2.to(), 0, f, pairing);
    TensorOp lhs = a3.after(a2).after(a1);
    // R23 R12 R23
    TensorOp b1 = r_op3(sp, 1, f, pairing);
    TensorOp b2 = r_op3(b1.to(), 0, f, pairing);
    TensorOp b3 = r_op3(b2.to(), 1, f, pairing);
    TensorOp rhs = b3.after(b2).after(b1);
    if (!(lhs.to() == rhs.to()))
        throw std::logic_error("qybe: composition spaces disagree");

    auto diff = TensorOp::first_difference(lhs, rhs, all_inputs(sp));
    report.add("qybe", "R12 R23 R12 = R23 R12 R23", !diff,
               diff ? "at " + tuple_name(sp, *diff) : "");
    return report;
}

CheckReport check_hexagon(std::shared_ptr<const ModuleAlgebra> m,
                          std::shared_ptr<const ModuleAlgebra> mp,
                          std::shared_ptr<const ModuleAlgebra> mpp, const TwistElement& f,
                          const Pairing& pairing) {
    CheckReport report;
    TensorSpace sp{{m, mp, mpp}};
    std::vector<int> inputs = all_inputs(sp);

    {
        // (i): R12 R23 = (id (x) Delta)(F) f12 f13 tau12 tau23
        TensorOp a1 = r_op3(sp, 1, f, pairing);
        TensorOp a2 = r_op3(a1.to(), 0, f, pairing);
        TensorOp lhs = a2.after(a1);
        TensorOp t23 = TensorOp::tau(sp, 1, 2);
        TensorOp t12 = TensorOp::tau(t23.to(), 0, 1);
        const TensorSpace& end = t12.to();
        TensorOp f13 = ftilde_op(end, 0, 2, pairing);
        TensorOp f12 = ftilde_op(end, 0, 1, pairing);
        TensorOp rhs = delta_twist_op(end, f, false)
                           .after(f12)
                           .after(f13)
                           .after(t12)
                           .after(t23);
        if (!(lhs.to() == end)) throw std::logic_error("hexagon(i): spaces disagree");
        auto diff = TensorOp::first_difference(lhs, rhs, inputs);
        report.add("hexagon", "(i) R12 R23", !diff, diff ? "at " + tuple_name(sp, *diff) : "");
    }
    {
        // (ii): R23 R12 = (Delta (x) id)(F) f23 f13 tau23 tau12
        TensorOp a1 = r_op3(sp, 0, f, pairing);
        TensorOp a2 = r_op3(a1.to(), 1, f, pairing);
        TensorOp lhs = a2.after(a1);
        TensorOp t12 = TensorOp::tau(sp, 0, 1);
        TensorOp t23 = TensorOp::tau(t12.to(), 1, 2);
        const TensorSpace& end = t23.to();
        TensorOp f13 = ftilde_op(end, 0, 2, pairing);
        TensorOp f23 = ftilde_op(end, 1, 2, pairing);
        TensorOp rhs = delta_twist_op(end, f, true)
                           .after(f23)
                           .after(f13)
                           .after(t23)
                           .after(t12);
        if (!(lhs.to() == end)) throw std::logic_error("hexagon(ii): spaces disagree");
        auto diff = TensorOp::first_difference(lhs, rhs, inputs);
        report.add("hexagon", "(ii) R23 R12", !diff, diff ? "at " + tuple_name(sp, *diff) : "");
    }
    return report;
}

CheckReport check_wef(const RootVector& zeta, int i, std::shared_ptr<const ModuleAlgebra> m,
                      std::shared_ptr<const ModuleAlgebra> mp, const TwistElement& f) {
    CheckReport report;
    const auto& ctx = f.ctx;
    TensorSpace sp{{m, mp}};
    std::vector<int> inputs = all_inputs(sp);
    RootVector lower = zeta - RootVector::alpha(ctx->n(), i);

    TensorOp fz = component_op(sp, 0, 1, f, zeta);
    TensorOp fl = component_op(sp, 0, 1, f, lower);

    std::vector<int> zero(ctx->n() - 1, 0);
    std::vector<int> ui = zero;
    ui[i - 1] = 1;
    AlgebraElement ei = ctx->build_E(i, i);
    AlgebraElement fi = ctx->build_F(i, i);
    AlgebraElement wi = ctx->from_monomial(ctx->group_monomial(ui, zero));
    AlgebraElement wpi = ctx->from_monomial(ctx->group_monomial(zero, ui));

    {
        // (i) group-likes commute with the component
        for (const auto& [name, g] : {std::pair<std::string, AlgebraElement>{"w", wi},
                                      {"wp", wpi}}) {
            TensorOp gg = TensorOp::slot_act(sp, 1, g).after(TensorOp::slot_act(sp, 0, g));
            auto diff = TensorOp::first_difference(gg.after(fz), fz.after(gg), inputs);
            report.add("wef(i)", name + std::to_string(i) + " zeta=" + zeta.to_string(), !diff,
                       diff ? "at " + tuple_name(sp, *diff) : "");
        }
    }
    {
        // (ii) (e_i (x) 1) F_z + (w_i (x) e_i) F_{z-a} = F_z (e_i (x) 1) + F_{z-a} (w'_i (x) e_i)
        TensorOp e0 = TensorOp::slot_act(sp, 0, ei);
        TensorOp we = TensorOp::slot_act(sp, 1, ei).after(TensorOp::slot_act(sp, 0, wi));
        TensorOp wpe = TensorOp::slot_act(sp, 1, ei).after(TensorOp::slot_act(sp, 0, wpi));
        TensorOp lhs = e0.after(fz) + we.after(fl);
        TensorOp rhs = fz.after(e0) + fl.after(wpe);
        auto diff = TensorOp::first_difference(lhs, rhs, inputs);
        report.add("wef(ii)", "e" + std::to_string(i) + " zeta=" + zeta.to_string(), !diff,
                   diff ? "at " + tuple_name(sp, *diff) : "");
    }
    {
        // (iii) (1 (x) f_i) F_z + (f_i (x) w'_i) F_{z-a} = F_z (1 (x) f_i) + F_{z-a} (f_i (x) w_i)
        TensorOp f1 = TensorOp::slot_act(sp, 1, fi);
        TensorOp fwp = TensorOp::slot_act(sp, 1, wpi).after(TensorOp::slot_act(sp, 0, fi));
        TensorOp fw = TensorOp::slot_act(sp, 1, wi).after(TensorOp::slot_act(sp, 0, fi));
        TensorOp lhs = f1.after(fz) + fwp.after(fl);
        TensorOp rhs = fz.after(f1) + fl.after(fw);
        auto diff = TensorOp::first_difference(lhs, rhs, inputs);
        report.add("wef(iii)", "f" + std::to_string(i) + " zeta=" + zeta.to_string(), !diff,
                   diff ? "at " + tuple_name(sp, *diff) : "");
    }
    return report;
}

CheckReport check_moreids(const RootVector& gamma, std::shared_ptr<const ModuleAlgebra> m,
                          std::shared_ptr<const ModuleAlgebra> mp,
                          std::shared_ptr<const ModuleAlgebra> mpp, const TwistElement& f,
                          const Pairing& pairing) {
    CheckReport report;
    const auto& ctx = f.ctx;
    TensorSpace sp{{m, mp, mpp}};
    std::vector<int> inputs = all_inputs(sp);

    // subdegrees 0 <= zeta <= gamma
    std::vector<RootVector> zetas;
    {
        RootVector cur = RootVector::zero(ctx->n());
        while (true) {
            zetas.push_back(cur);
            size_t k = 0;
            while (k < cur.comp.size()) {
                if (cur.comp[k] < gamma.comp[k]) {
                    cur.comp[k]++;
                    break;
                }
                cur.comp[k] = 0;
                ++k;
            }
            if (k == cur.comp.size()) break;
        }
    }

    auto omega_mid = [&](const RootVector& zeta, bool primed) {
        std::vector<int> zero(ctx->n() - 1, 0);
        AlgebraElement g = ctx->from_monomial(
            primed ? ctx->group_monomial(zero, zeta.comp) : ctx->group_monomial(zeta.comp, zero));
        return TensorOp::slot_act(sp, 1, g);
    };

    // single-component twist restricted to F_gamma, as a 3-slot delta op
    TwistElement only;
    only.ctx = ctx;
    if (const TensorElement* comp = f.component(gamma)) only.components.emplace(gamma, *comp);

    {
        // (i) (Delta (x) id)(F_gamma) = sum (F_{gamma-zeta})^{23} (F_zeta)^{13} (1 (x) w'_zeta (x) 1)
        TensorOp lhs = delta_twist_op(sp, only, true);
        std::optional<TensorOp> rhs;
        for (const auto& zeta : zetas) {
            RootVector rest = gamma - zeta;
            TensorOp term = component_op(sp, 1, 2, f, rest)
                                .after(component_op(sp, 0, 2, f, zeta))
                                .after(omega_mid(zeta, true));
            rhs = rhs ? *rhs + term : term;
        }
        auto diff = TensorOp::first_difference(lhs, *rhs, inputs);
        report.add("moreids(i)", "gamma=" + gamma.to_string(), !diff,
                   diff ? "at " + tuple_name(sp, *diff) : "");
    }
    {
        // (ii) (id (x) Delta)(F_gamma) = sum (F_{gamma-zeta})^{12} (F_zeta)^{13} (1 (x) w_zeta (x) 1)
        TensorOp lhs = delta_twist_op(sp, only, false);
        std::optional<TensorOp> rhs;
        for (const auto& zeta : zetas) {
            RootVector rest = gamma - zeta;
            TensorOp term = component_op(sp, 0, 1, f, rest)
                                .after(component_op(sp, 0, 2, f, zeta))
                                .after(omega_mid(zeta, false));
            rhs = rhs ? *rhs + term : term;
        }
        auto diff = TensorOp::first_difference(lhs, *rhs, inputs);
        report.add("moreids(ii)", "gamma=" + gamma.to_string(), !diff,
                   diff ? "at " + tuple_name(sp, *diff) : "");
    }
    // (iii)/(iv): f-tilde exchange with (F_zeta)^{13}
    for (const auto& zeta : zetas) {
        TensorOp f13 = component_op(sp, 0, 2, f, zeta);
        {
            TensorOp f12 = ftilde_op(sp, 0, 1, pairing);
            TensorOp lhs = f12.after(f13);
            TensorOp rhs = f13.after(omega_mid(zeta, false)).after(f12);
            auto diff = TensorOp::first_difference(lhs, rhs, inputs);
            report.add("moreids(iii)", "zeta=" + zeta.to_string(), !diff,
                       diff ? "at " + tuple_name(sp, *diff) : "");
        }
        {
            TensorOp f23 = ftilde_op(sp, 1, 2, pairing);
            TensorOp lhs = f23.after(f13);
            TensorOp rhs = f13.after(omega_mid(zeta, true)).after(f23);
            auto diff = TensorOp::first_difference(lhs, rhs, inputs);
            report.add("moreids(iv)", "zeta=" + zeta.to_string(), !diff,
                       diff ? "at " + tuple_name(sp, *diff) : "");
        }
    }
    return report;
}

// ---------------------------------------------------------------- deformed product

namespace {

ModuleElement element_at_order(const ModuleElement& m, int order) {
    ModuleElement out;
    for (const auto& [l, c] : m.terms()) out.add_term(l, c.at_order(order));
    return out;
}

}  // namespace

DeformedProduct::DeformedProduct(std::shared_ptr<const ModuleAlgebra> base, TensorElement twist,
                                 int working_order)
    : base_(std::move(base)), twist_(std::move(twist)), order_(working_order) {
    if (order_ > base_->context()->working_order())
        throw std::invalid_argument(
            "DeformedProduct: working_order exceeds the algebra's scalar order");
}

ModuleElement DeformedProduct::product(int a, int b) const {
    {
        std::lock_guard<std::mutex> lock(*mutex_);
        auto it = memo_->find({a, b});
        if (it != memo_->end()) return it->second;
    }
    const ModuleAlgebra& alg = *base_;
    const auto& ctx = *alg.context();
    ModuleElement acc;
    for (const auto& [slots, c] : twist_.terms()) {
        ModuleElement left = alg.act_poly(ctx.expand(slots[0]), alg.basis(a));
        if (left.is_zero()) continue;
        ModuleElement right = alg.act_poly(ctx.expand(slots[1]), alg.basis(b));
        if (right.is_zero()) continue;
        acc += alg.mul(left, right).scaled(c);
    }
    ModuleElement out = element_at_order(acc, order_);
    std::lock_guard<std::mutex> lock(*mutex_);
    memo_->emplace(std::make_pair(a, b), out);
    return out;
}

ModuleElement DeformedProduct::mul(const ModuleElement& x, const ModuleElement& y) const {
    ModuleElement out;
    for (const auto& [la, ca] : x.terms())
        for (const auto& [lb, cb] : y.terms())
            out += product(la, lb).scaled(ca.at_order(order_) * cb.at_order(order_));
    return out;
}

ModuleElement DeformedProduct::coefficient(int i, int a, int b) const {
    if (i > order_) throw std::out_of_range("coefficient layer exceeds working_order");
    ModuleElement full = product(a, b);
    ModuleElement out;
    const long ell = base_->context()->ell();
    const int wo = base_->context()->working_order();
    for (const auto& [l, c] : full.terms()) {
        CycScalar layer = c.coeff(i);
        if (!layer.is_zero()) out.add_term(l, LaurentScalar::from_cyc(layer, wo));
    }
    (void)ell;
    return out;
}

DeformedProduct twisted_product(std::shared_ptr<const ModuleAlgebra> a, const TwistElement& f,
                                int working_order) {
    return DeformedProduct(std::move(a), f.flatten(), working_order);
}

DeformedProduct twisted_product(std::shared_ptr<const ModuleAlgebra> a, const TensorElement& f,
                                int working_order) {
    return DeformedProduct(std::move(a), f, working_order);
}

CheckReport check_associativity(const DeformedProduct& d, int degcap) {
    CheckReport report;
    const ModuleAlgebra& alg = d.base();
    bool ok = true;
    std::string witness;
    for (int a = 0; a < alg.size() && ok; ++a) {
        if (alg.grade(a) > degcap) continue;
        for (int b = 0; b < alg.size() && ok; ++b) {
            if (alg.grade(b) > degcap) continue;
            for (int c = 0; c < alg.size() && ok; ++c) {
                if (alg.grade(c) > degcap) continue;
                try {
                    ModuleElement left = d.mul(d.product(a, b), alg.basis(c));
                    ModuleElement right = d.mul(alg.basis(a), d.product(b, c));
                    if (left != right) {
                        ok = false;
                        witness = "(" + alg.label(a) + ", " + alg.label(b) + ", " + alg.label(c) +
                                  ")";
                    }
                } catch (const degree_overflow_error&) {
                    ok = false;
                    witness = "degree overflow; rebuild the algebra with maxdeg >= 3*degcap";
                }
            }
        }
    }
    report.add("associativity", alg.kind() + " degcap " + std::to_string(degcap), ok, witness);
    return report;
}

CheckReport check_mod_t(const DeformedProduct& d, int degcap) {
    CheckReport report;
    const ModuleAlgebra& alg = d.base();
    bool ok = true;
    std::string witness;
    for (int a = 0; a < alg.size() && ok; ++a) {
        if (alg.grade(a) > degcap) continue;
        for (int b = 0; b < alg.size() && ok; ++b) {
            if (alg.grade(b) > degcap) continue;
            ModuleElement mu0;
            try {
                mu0 = d.coefficient(0, a, b);
            } catch (const degree_overflow_error&) {
                continue;
            }
            ModuleElement base = element_at_order(alg.product(a, b), d.working_order());
            if (mu0 != base) {
                ok = false;
                witness = "(" + alg.label(a) + ", " + alg.label(b) + ")";
            }
        }
    }
    report.add("mod-t", "mu_0 equals the base product", ok, witness);
    return report;
}

CheckReport check_hochschild_cocycle(const BilinearMap& mu1, const ModuleAlgebra& a, int degcap) {
    CheckReport report;
    bool ok = true;
    std::string witness;
    for (int x = 0; x < a.size() && ok; ++x) {
        if (a.grade(x) > degcap) continue;
        for (int y = 0; y < a.size() && ok; ++y) {
            if (a.grade(y) > degcap) continue;
            for (int z = 0; z < a.size() && ok; ++z) {
                if (a.grade(z) > degcap) continue;
                try {
                    // mu1(x,y) z + mu1(xy, z) = x mu1(y,z) + mu1(x, yz)
                    ModuleElement lhs = a.mul(mu1(x, y), a.basis(z));
                    ModuleElement xy = a.product(x, y);
                    for (const auto& [l, c] : xy.terms()) lhs += mu1(l, z).scaled(c);
                    ModuleElement rhs = a.mul(a.basis(x), mu1(y, z));
                    ModuleElement yz = a.product(y, z);
                    for (const auto& [l, c] : yz.terms()) rhs += mu1(x, l).scaled(c);
                    if (lhs != rhs) {
                        ok = false;
                        witness = "(" + a.label(x) + ", " + a.label(y) + ", " + a.label(z) + ")";
                    }
                } catch (const degree_overflow_error&) {
                    ok = false;
                    witness = "degree overflow during cocycle check";
                }
            }
        }
    }
    report.add("hochschild-cocycle", "degcap " + std::to_string(degcap), ok, witness);
    return report;
}

CheckReport check_twist_identity(const TwistElement& f, std::shared_ptr<const ModuleAlgebra> a1,
                                 std::shared_ptr<const ModuleAlgebra> a2,
                                 std::shared_ptr<const ModuleAlgebra> a3, int degcap) {
    CheckReport report;
    TensorSpace sp{{a1, a2, a3}};
    TensorOp lhs = delta_twist_op(sp, f, true).after(twist_op(sp, 0, 1, f));
    TensorOp rhs = delta_twist_op(sp, f, false).after(twist_op(sp, 1, 2, f));
    std::vector<int> inputs = inputs_with_grades(sp, degcap);
    auto diff = TensorOp::first_difference(lhs, rhs, inputs);
    report.add("twist-identity",
               a1->kind() + " triples, degcap " + std::to_string(degcap), !diff,
               diff ? "at " + tuple_name(sp, *diff) : "");
    return report;
}

CheckReport check_udf_degree(const TwistElement& f, const ModuleAlgebra& a) {
    CheckReport report;
    const auto& ctx = *a.context();
    for (const auto& [zeta, comp] : f.components) {
        if (zeta.is_zero()) {
            report.add("udf-degree", "identity component", true);
            continue;
        }
        // cheap lower bound first: the minimum t-degree each tensor factor
        // can produce on any basis label; cancellations only raise degrees
        std::optional<int> bound;
        for (const auto& [slots, c] : comp.terms()) {
            std::optional<int> lmin, rmin;
            NCPoly vfree = ctx.expand(slots[0]);
            NCPoly ufree = ctx.expand(slots[1]);
            for (int x = 0; x < a.size(); ++x) {
                ModuleElement left = a.act_poly(vfree, a.basis(x));
                if (auto d = left.min_t_degree(); d && (!lmin || *d < *lmin)) lmin = d;
                ModuleElement right = a.act_poly(ufree, a.basis(x));
                if (auto d = right.min_t_degree(); d && (!rmin || *d < *rmin)) rmin = d;
            }
            if (!lmin || !rmin) continue;  // the term annihilates everything
            int termbound = *lmin + *rmin + (c.is_zero() ? 0 : c.lowest_exponent());
            if (!bound || termbound < *bound) bound = termbound;
        }
        if (!bound || *bound >= 1) {
            std::ostringstream inst;
            inst << "component " << zeta.to_string();
            if (bound) inst << " (t-degree >= " << *bound << ")";
            report.add("udf-degree", inst.str(), true);
            continue;
        }
        // the bound fails: scan pairs exactly for a genuine witness
        bool ok = true;
        std::string witness;
        std::optional<int> observed;
        for (int x = 0; x < a.size() && ok; ++x) {
            for (int y = 0; y < a.size() && ok; ++y) {
                std::map<std::pair<int, int>, LaurentScalar> tensor;
                for (const auto& [slots, c] : comp.terms()) {
                    ModuleElement left = a.act_poly(ctx.expand(slots[0]), a.basis(x));
                    if (left.is_zero()) continue;
                    ModuleElement right = a.act_poly(ctx.expand(slots[1]), a.basis(y));
                    for (const auto& [la, ca] : left.terms()) {
                        for (const auto& [lb, cb] : right.terms()) {
                            auto key = std::make_pair(la, lb);
                            LaurentScalar add = c * ca * cb;
                            if (add.is_zero()) continue;
                            auto it = tensor.find(key);
                            if (it == tensor.end()) {
                                tensor.emplace(key, std::move(add));
                            } else {
                                it->second += add;
                                if (it->second.is_zero()) tensor.erase(it);
                            }
                        }
                    }
                }
                for (const auto& [key, c] : tensor) {
                    int low = c.lowest_exponent();
                    if (!observed || low < *observed) observed = low;
                    if (low < 1) {
                        ok = false;
                        witness = "t-degree " + std::to_string(low) + " at (" + a.label(x) +
                                  ", " + a.label(y) + ")";
                    }
                }
            }
        }
        std::ostringstream inst;
        inst << "component " << zeta.to_string();
        if (observed) inst << " (min t-degree " << *observed << ")";
        report.add("udf-degree", inst.str(), ok, witness);
    }
    report.add("udf-degree",
               "finitely many components: " + std::to_string(f.components.size()), true);
    return report;
}

// ---------------------------------------------------------------- Moyal demo

ExpDemo::ExpDemo(int working_order) : order_(working_order) {
    if (working_order < 1) throw std::invalid_argument("ExpDemo: working_order must be >= 1");
}

ExpDemo::Poly ExpDemo::monomial(int a, int b) const {
    Poly p;
    p.emplace(Mono{a, b}, LaurentScalar::one(1, order_));
    return p;
}

ExpDemo::Poly ExpDemo::base_mul(const Poly& p, const Poly& q) const {
    Poly out;
    for (const auto& [ma, ca] : p) {
        for (const auto& [mb, cb] : q) {
            Mono m{ma.first + mb.first, ma.second + mb.second};
            LaurentScalar c = ca * cb;
            auto it = out.find(m);
            if (it == out.end()) {
                out.emplace(m, std::move(c));
            } else {
                it->second += c;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    }
    return out;
}

ExpDemo::Poly ExpDemo::dx(const Poly& p) const {
    Poly out;
    for (const auto& [m, c] : p) {
        if (m.first == 0) continue;
        out.emplace(Mono{m.first - 1, m.second},
                    c.scaled(CycScalar::from_rational(1, Rational(m.first))));
    }
    return out;
}

ExpDemo::Poly ExpDemo::dy(const Poly& p) const {
    Poly out;
    for (const auto& [m, c] : p) {
        if (m.second == 0) continue;
        out.emplace(Mono{m.first, m.second - 1},
                    c.scaled(CycScalar::from_rational(1, Rational(m.second))));
    }
    return out;
}

ExpDemo::Poly ExpDemo::star(const Poly& p, const Poly& q) const {
    Poly out;
    Poly dp = p, dq = q;
    Rational factorial(1);
    for (int i = 0; i <= order_; ++i) {
        if (i > 0) {
            dp = dx(dp);
            dq = dy(dq);
            factorial *= Rational(i);
        }
        if (dp.empty() || dq.empty()) break;
        // t^i / i! * dx^i(p) dy^i(q)
        Poly term = base_mul(dp, dq);
        LaurentScalar scale = LaurentScalar::term(
            CycScalar::from_rational(1, factorial.inverse()), i, order_);
        for (const auto& [m, c] : term) {
            LaurentScalar add = c * scale;
            if (add.is_zero()) continue;
            auto it = out.find(m);
            if (it == out.end()) {
                out.emplace(m, std::move(add));
            } else {
                it->second += add;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    }
    return out;
}

std::string ExpDemo::poly_to_string(const Poly& p) {
    if (p.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p) {
        if (!first) os << " + ";
        first = false;
        std::string mono;
        if (m.first) mono += "x" + (m.first > 1 ? "^" + std::to_string(m.first) : "");
        if (m.second) {
            if (!mono.empty()) mono += "*";
            mono += "y" + (m.second > 1 ? "^" + std::to_string(m.second) : "");
        }
        if (mono.empty()) mono = "1";
        std::string cs = c.to_string();
        if (cs == "1") {
            os << mono;
        } else {
            bool composite = cs.find(' ') != std::string::npos;
            os << (composite ? "(" + cs + ")" : cs);
            if (mono != "1") os << "*" << mono;
        }
    }
    return os.str();
}

CheckReport ExpDemo::verify(int degcap) const {
    CheckReport report;

    // pinned low-order identities
    Poly x = monomial(1, 0), y = monomial(0, 1);
    Poly xy = star(x, y);
    Poly expect_xy = base_mul(x, y);
    expect_xy.emplace(Mono{0, 0}, LaurentScalar::term(CycScalar::one(1), 1, order_));
    report.add("exp-demo", "x*y = xy + t", xy == expect_xy,
               xy == expect_xy ? "" : poly_to_string(xy));
    Poly yx = star(y, x);
    report.add("exp-demo", "y*x = yx", yx == base_mul(y, x),
               yx == base_mul(y, x) ? "" : poly_to_string(yx));
    Poly xx = star(x, x);
    report.add("exp-demo", "x*x = x^2", xx == base_mul(x, x), "");
    Poly comm = xy;
    for (const auto& [m, c] : yx) {
        auto it = comm.find(m);
        if (it == comm.end()) {
            comm.emplace(m, -c);
        } else {
            it->second -= c;
            if (it->second.is_zero()) comm.erase(it);
        }
    }
    Poly just_t{{Mono{0, 0}, LaurentScalar::term(CycScalar::one(1), 1, order_)}};
    report.add("exp-demo", "x*y - y*x = t", comm == just_t,
               comm == just_t ? "" : poly_to_string(comm));

    // associativity over monomials of total degree <= degcap
    bool ok = true;
    std::string witness;
    for (int a1 = 0; a1 <= degcap && ok; ++a1)
        for (int b1 = 0; a1 + b1 <= degcap && ok; ++b1)
            for (int a2 = 0; a2 <= degcap && ok; ++a2)
                for (int b2 = 0; a2 + b2 <= degcap && ok; ++b2)
                    for (int a3 = 0; a3 <= degcap && ok; ++a3)
                        for (int b3 = 0; a3 + b3 <= degcap && ok; ++b3) {
                            Poly p = monomial(a1, b1), q = monomial(a2, b2),
                                 r = monomial(a3, b3);
                            if (star(star(p, q), r) != star(p, star(q, r))) {
                                ok = false;
                                witness = "x^" + std::to_string(a1) + "y^" + std::to_string(b1) +
                                          " ...";
                            }
                        }
    report.add("exp-demo", "associativity degcap " + std::to_string(degcap), ok, witness);
    return report;
}

}  // namespace qdeform
