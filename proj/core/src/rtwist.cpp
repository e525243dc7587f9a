#include "qdeform/rtwist.hpp"

#include <sstream>

namespace qdeform {

WeightChar::WeightChar(std::vector<LaurentScalar> values_w, std::vector<LaurentScalar> values_wp)
    : values_w_(std::move(values_w)), values_wp_(std::move(values_wp)) {
    if (values_w_.size() != values_wp_.size())
        throw std::invalid_argument("WeightChar: rank mismatch");
    for (const auto& v : values_w_)
        if (v.is_zero()) throw std::invalid_argument("WeightChar: values must be invertible");
    for (const auto& v : values_wp_)
        if (v.is_zero()) throw std::invalid_argument("WeightChar: values must be invertible");
}

WeightChar WeightChar::trivial(int n, long ell, int working_order) {
    return WeightChar(std::vector<LaurentScalar>(n - 1, LaurentScalar::one(ell, working_order)),
                      std::vector<LaurentScalar>(n - 1, LaurentScalar::one(ell, working_order)));
}

LaurentScalar WeightChar::eval_group(const std::vector<int>& a, const std::vector<int>& b) const {
    if (a.size() != values_w_.size() || b.size() != values_wp_.size())
        throw std::invalid_argument("WeightChar: rank mismatch in evaluation");
    LaurentScalar out = LaurentScalar::one(values_w_[0].ell(), values_w_[0].working_order());
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i]) out *= values_w_[i].pow(a[i]);
        if (b[i]) out *= values_wp_[i].pow(b[i]);
    }
    return out;
}

LaurentScalar WeightChar::eval_element(const AlgebraElement& x) const {
    LaurentScalar out = LaurentScalar::zero(values_w_[0].ell(), values_w_[0].working_order());
    for (const auto& [m, c] : x.terms()) {
        if (!m.group_only())
            throw std::invalid_argument("WeightChar: evaluation requires a group-only element");
        out += c * eval_group(m.w_exp, m.wp_exp);
    }
    return out;
}

WeightChar WeightChar::operator*(const WeightChar& o) const {
    if (values_w_.size() != o.values_w_.size())
        throw std::invalid_argument("WeightChar: rank mismatch");
    std::vector<LaurentScalar> w = values_w_, wp = values_wp_;
    for (size_t i = 0; i < w.size(); ++i) {
        w[i] *= o.values_w_[i];
        wp[i] *= o.values_wp_[i];
    }
    return WeightChar(std::move(w), std::move(wp));
}

WeightChar WeightChar::inverse() const {
    std::vector<LaurentScalar> w = values_w_, wp = values_wp_;
    for (auto& v : w) v = v.inverse();
    for (auto& v : wp) v = v.inverse();
    return WeightChar(std::move(w), std::move(wp));
}

bool operator<(const WeightChar& a, const WeightChar& b) {
    if (a.values_w_.size() != b.values_w_.size())
        return a.values_w_.size() < b.values_w_.size();
    for (size_t i = 0; i < a.values_w_.size(); ++i) {
        if (a.values_w_[i] != b.values_w_[i]) return a.values_w_[i] < b.values_w_[i];
        if (a.values_wp_[i] != b.values_wp_[i]) return a.values_wp_[i] < b.values_wp_[i];
    }
    return false;
}

std::string WeightChar::to_string() const {
    std::ostringstream os;
    for (size_t i = 0; i < values_w_.size(); ++i) {
        if (i) os << ", ";
        os << "w" << (i + 1) << "->" << values_w_[i].to_string() << ", wp" << (i + 1) << "->"
           << values_wp_[i].to_string();
    }
    return os.str();
}

WeightChar lambda_hat(const RootVector& lambda, const QGroup& ctx) {
    const int rank = ctx.n() - 1;
    if (lambda.rank() != rank) throw std::invalid_argument("lambda_hat: rank mismatch");
    auto eps_lambda = [&](int a) {
        // <eps_a, lambda> = lambda_a - lambda_{a-1} with lambda_0 = lambda_n = 0
        long v = 0;
        if (a <= rank) v += lambda.comp[a - 1];
        if (a >= 2 && a - 1 <= rank) v -= lambda.comp[a - 2];
        return v;
    };
    std::vector<LaurentScalar> w, wp;
    for (int j = 1; j <= rank; ++j) {
        CycScalar cw = ctx.r().pow(eps_lambda(j)) * ctx.s().pow(eps_lambda(j + 1));
        CycScalar cwp = ctx.r().pow(eps_lambda(j + 1)) * ctx.s().pow(eps_lambda(j));
        w.push_back(ctx.laurent(cw));
        wp.push_back(ctx.laurent(cwp));
    }
    return WeightChar(std::move(w), std::move(wp));
}

TensorElement TwistElement::flatten() const {
    TensorElement out(2, ctx);
    for (const auto& [zeta, comp] : components) out += comp;
    return out;
}

TwistElement twisting_element(const Pairing& pairing) {
    const auto& ctx = pairing.context();
    const QGroupParams& p = ctx->params();
    if (!check_relprime(p.n, p.y, p.z, p.ell))
        throw std::domain_error("twisting element requires the relprime condition; "
                                "the pairing is degenerate for these parameters");
    TwistElement twist;
    twist.ctx = ctx;
    for (const RootVector& zeta : ctx->truncated_degrees()) {
        auto plus = ctx->pbw_basis_plus(zeta);
        auto duals = pairing.dual_basis_plus(zeta);
        TensorElement comp(2, ctx);
        for (size_t k = 0; k < plus.size(); ++k) {
            for (const auto& [vm, vc] : duals[k].terms()) comp.add_term({vm, plus[k]}, vc);
        }
        twist.components.emplace(zeta, std::move(comp));
    }
    return twist;
}

RFactors r_factors(const Pairing& pairing) {
    const auto& ctx = pairing.context();
    const QGroupParams& p = ctx->params();
    if (!p.restricted)
        throw std::invalid_argument("r_factors: parameters must select the restricted quotient");
    if (!check_relprime(p.n, p.y, p.z, p.ell))
        throw std::domain_error("r_factors requires the relprime condition");

    RFactors out{TensorElement(2, ctx), TensorElement(2, ctx), TensorElement(2, ctx),
                 TensorElement(2, ctx)};
    for (const RootVector& zeta : ctx->truncated_degrees()) {
        auto plus = ctx->pbw_basis_plus(zeta);
        auto duals = pairing.dual_basis_plus(zeta);
        for (size_t k = 0; k < plus.size(); ++k) {
            for (const auto& [vm, vc] : duals[k].terms()) {
                out.R_ef.add_term({plus[k], vm}, vc);
                out.R_fe.add_term({vm, plus[k]}, vc);
            }
        }
    }
    auto stars = pairing.group_dual_basis();
    std::vector<int> zero(p.n - 1, 0);
    for (const auto& [a, star] : stars) {
        PBWMonomial wa = ctx->group_monomial(a, zero);
        for (const auto& [sm, sc] : star.terms()) {
            out.R_w.add_term({wa, sm}, sc);
            out.R_wp.add_term({sm, wa}, sc);
        }
    }
    return out;
}

LaurentScalar f_scalar(const WeightChar& chi, const WeightChar& psi, const RootVector& lambda,
                       const RootVector& mu, const Pairing& pairing) {
    const auto& ctx = pairing.context();
    const int rank = ctx->n() - 1;
    if (lambda.rank() != rank || mu.rank() != rank)
        throw std::invalid_argument("f_scalar: rank mismatch");
    LaurentScalar out = LaurentScalar::one(ctx->ell(), ctx->working_order());
    // psi(omega_lambda^{-1})
    for (int j = 1; j <= rank; ++j)
        if (lambda.comp[j - 1]) out *= psi.w(j).pow(-lambda.comp[j - 1]);
    // chi(omega'_mu)
    for (int i = 1; i <= rank; ++i)
        if (mu.comp[i - 1]) out *= chi.wp(i).pow(mu.comp[i - 1]);
    // (omega'_mu | omega_lambda^{-1})
    CycScalar c = CycScalar::one(ctx->ell());
    for (int i = 1; i <= rank; ++i) {
        for (int j = 1; j <= rank; ++j) {
            long e = -static_cast<long>(mu.comp[i - 1]) * lambda.comp[j - 1];
            if (e) c *= pairing.omega_pair(i, j).pow(e);
        }
    }
    return out.scaled(c);
}

LaurentScalar xi(const WeightChar& chi, const WeightChar& psi, const Pairing& pairing) {
    const auto& ctx = pairing.context();
    auto stars = pairing.group_dual_basis();
    LaurentScalar out = LaurentScalar::zero(ctx->ell(), ctx->working_order());
    std::vector<int> zero(ctx->n() - 1, 0);
    for (const auto& [a, star] : stars) {
        out += chi.eval_element(star) * psi.eval_group(a, zero);
    }
    return out;
}

}  // namespace qdeform
