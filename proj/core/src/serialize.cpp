#include "qdeform/serialize.hpp"

#include "qdeform/expr.hpp"

namespace qdeform {

using nlohmann::json;

json params_to_json(const QGroupParams& p) {
    return json{{"n", p.n},
                {"ell", p.ell},
                {"y", p.y},
                {"z", p.z},
                {"restricted", p.restricted},
                {"height_bound", p.height_bound}};
}

QGroupParams params_from_json(const json& j) {
    QGroupParams p;
    p.n = j.at("n").get<int>();
    p.ell = j.at("ell").get<long>();
    p.y = j.at("y").get<long>();
    p.z = j.at("z").get<long>();
    p.restricted = j.value("restricted", false);
    p.height_bound = j.value("height_bound", 0);
    return p;
}

namespace {

json root_exps_to_json(const std::map<RootPair, int>& exps) {
    json out = json::array();
    for (const auto& [root, a] : exps) out.push_back({root.first, root.second, a});
    return out;
}

std::map<RootPair, int> root_exps_from_json(const json& j) {
    std::map<RootPair, int> out;
    for (const auto& e : j) {
        out[{e.at(0).get<int>(), e.at(1).get<int>()}] = e.at(2).get<int>();
    }
    return out;
}

}  // namespace

json monomial_to_json(const PBWMonomial& m) {
    return json{{"f", root_exps_to_json(m.f_exp)},
                {"w", m.w_exp},
                {"wp", m.wp_exp},
                {"e", root_exps_to_json(m.e_exp)}};
}

PBWMonomial monomial_from_json(const json& j, const QGroup& ctx) {
    PBWMonomial m = PBWMonomial::unit(ctx.n());
    m.f_exp = root_exps_from_json(j.at("f"));
    m.e_exp = root_exps_from_json(j.at("e"));
    m.w_exp = j.at("w").get<std::vector<int>>();
    m.wp_exp = j.at("wp").get<std::vector<int>>();
    if (static_cast<int>(m.w_exp.size()) != ctx.n() - 1 ||
        static_cast<int>(m.wp_exp.size()) != ctx.n() - 1)
        throw std::invalid_argument("monomial_from_json: wrong group rank");
    return m;
}

json element_to_json(const AlgebraElement& x) {
    json terms = json::array();
    for (const auto& [m, c] : x.terms()) {
        terms.push_back({{"coeff", c.to_string()}, {"monomial", monomial_to_json(m)}});
    }
    json out{{"schema", kSchemaTag}, {"kind", "algebra_element"}, {"terms", terms}};
    if (x.context()) out["params"] = params_to_json(x.context()->params());
    return out;
}

json tensor_to_json(const TensorElement& x) {
    json terms = json::array();
    for (const auto& [slots, c] : x.terms()) {
        json js = json::array();
        for (const auto& m : slots) js.push_back(monomial_to_json(m));
        terms.push_back({{"coeff", c.to_string()}, {"slots", js}});
    }
    return json{{"schema", kSchemaTag},
                {"kind", "tensor_element"},
                {"arity", x.arity()},
                {"terms", terms}};
}

json gram_to_json(const GramMatrix& g) {
    json rows = json::array();
    for (int r = 0; r < g.entries.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < g.entries.cols(); ++c) row.push_back(g.entries.at(r, c).to_string());
        rows.push_back(row);
    }
    json minus = json::array(), plus = json::array();
    for (const auto& m : g.minus_basis) minus.push_back(m.to_string());
    for (const auto& m : g.plus_basis) plus.push_back(m.to_string());
    return json{{"schema", kSchemaTag},
                {"kind", "gram_matrix"},
                {"degree", g.degree.comp},
                {"rows", minus},
                {"cols", plus},
                {"entries", rows}};
}

json twist_to_json(const TwistElement& f) {
    json comps = json::array();
    for (const auto& [zeta, comp] : f.components) {
        json terms = json::array();
        for (const auto& [slots, c] : comp.terms()) {
            terms.push_back({{"coeff", c.to_string()},
                             {"left", monomial_to_json(slots[0])},
                             {"right", monomial_to_json(slots[1])}});
        }
        comps.push_back({{"zeta", zeta.comp}, {"terms", terms}});
    }
    json out{{"schema", kSchemaTag}, {"kind", "twist"}, {"components", comps}};
    if (f.ctx) out["params"] = params_to_json(f.ctx->params());
    return out;
}

TwistElement twist_from_json(const json& j, std::shared_ptr<const QGroup> ctx) {
    if (j.value("kind", "") != "twist")
        throw std::invalid_argument("twist_from_json: not a twist document");
    TwistElement f;
    f.ctx = ctx;
    for (const auto& comp : j.at("components")) {
        RootVector zeta(comp.at("zeta").get<std::vector<int>>());
        TensorElement te(2, ctx);
        for (const auto& term : comp.at("terms")) {
            PBWMonomial left = monomial_from_json(term.at("left"), *ctx);
            PBWMonomial right = monomial_from_json(term.at("right"), *ctx);
            LaurentScalar c = eval_scalar(term.at("coeff").get<std::string>(), ctx->ell(),
                                          ctx->working_order());
            te.add_term({left, right}, c);
        }
        f.components.emplace(zeta, std::move(te));
    }
    return f;
}

json report_to_json(const CheckReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        json je{{"check", e.check}, {"instance", e.instance}, {"status", e.pass ? "pass" : "fail"}};
        if (!e.witness.empty()) je["witness"] = e.witness;
        entries.push_back(je);
    }
    return json{{"schema", kSchemaTag},
                {"kind", "report"},
                {"entries", entries},
                {"failures", r.failures()}};
}

json algebra_to_json(const ModuleAlgebra& a) {
    json basis = json::array();
    for (int i = 0; i < a.size(); ++i)
        basis.push_back({{"label", a.label(i)}, {"grade", a.grade(i)}});

    json products = json::array();
    if (a.has_product()) {
        for (int x = 0; x < a.size(); ++x) {
            for (int y = 0; y < a.size(); ++y) {
                if (a.grade(x) + a.grade(y) > a.maxdeg()) continue;
                json result = json::array();
                ModuleElement prod = a.product(x, y);
                for (const auto& [l, c] : prod.terms())
                    result.push_back({{"label", a.label(l)}, {"coeff", c.to_string()}});
                products.push_back({{"a", a.label(x)}, {"b", a.label(y)}, {"result", result}});
            }
        }
    }

    json actions = json::array();
    const int rank = a.context()->n() - 1;
    std::vector<GenSymbol> gens;
    for (int i = 1; i <= rank; ++i) {
        gens.push_back(GenSymbol::e(i));
        gens.push_back(GenSymbol::f(i));
        gens.push_back(GenSymbol::w(i));
        gens.push_back(GenSymbol::w(i, -1));
        gens.push_back(GenSymbol::wp(i));
        gens.push_back(GenSymbol::wp(i, -1));
    }
    for (const auto& g : gens) {
        for (int l = 0; l < a.size(); ++l) {
            ModuleElement img = a.act_gen(g, l);
            if (img.is_zero()) continue;
            json result = json::array();
            for (const auto& [t, c] : img.terms())
                result.push_back({{"label", a.label(t)}, {"coeff", c.to_string()}});
            actions.push_back({{"gen", g.to_string()}, {"label", a.label(l)}, {"result", result}});
        }
    }

    return json{{"schema", kSchemaTag},
                {"kind", "module_algebra"},
                {"algebra", a.kind()},
                {"params", params_to_json(a.context()->params())},
                {"maxdeg", a.maxdeg()},
                {"basis", basis},
                {"products", products},
                {"actions", actions}};
}

}  // namespace qdeform
