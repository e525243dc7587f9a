#include "qdeform/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qdeform/expr.hpp"
#include "qdeform/serialize.hpp"

namespace qdeform {

namespace {

using nlohmann::json;

void add_common(CLI::App* cmd, SessionConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "read default flag values from a key=value file");
    cmd->add_option("--n", cfg.n, "rank parameter n of sl_n");
    cmd->add_option("--ell", cfg.ell, "order of the root of unity theta");
    cmd->add_option("--y", cfg.y, "exponent with r = theta^y");
    cmd->add_option("--z", cfg.z, "exponent with s = theta^z");
    cmd->add_flag("--restricted", cfg.restricted, "work in the restricted quotient");
    cmd->add_option("--height-bound", cfg.height_bound, "graded computation cap (0: default)");
    cmd->add_option("--maxdeg", cfg.maxdeg, "degree cap for module algebras");
    cmd->add_option("--order", cfg.working_order, "Laurent working order");
    cmd->add_option("--format", cfg.output_format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", cfg.output_path, "write output to a file instead of stdout");
}

// key=value defaults; explicit command-line flags win
void apply_config_file(CLI::App* active, SessionConfig& cfg, const std::string& path) {
    if (path.empty()) return;
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open config file " + path);
    std::string line;
    while (std::getline(file, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        auto given = [&](const std::string& flag) { return active->count(flag) > 0; };
        if (key == "n" && !given("--n")) cfg.n = std::stoi(value);
        else if (key == "ell" && !given("--ell")) cfg.ell = std::stol(value);
        else if (key == "y" && !given("--y")) cfg.y = std::stol(value);
        else if (key == "z" && !given("--z")) cfg.z = std::stol(value);
        else if (key == "restricted" && !given("--restricted"))
            cfg.restricted = (value == "true" || value == "1");
        else if ((key == "height-bound" || key == "height_bound") && !given("--height-bound"))
            cfg.height_bound = std::stoi(value);
        else if (key == "maxdeg" && !given("--maxdeg")) cfg.maxdeg = std::stoi(value);
        else if (key == "order" && !given("--order")) cfg.working_order = std::stoi(value);
        else if (key == "format" && !given("--format")) cfg.output_format = value;
        else if (key == "out" && !given("--out")) cfg.output_path = value;
    }
}

std::shared_ptr<QGroup> make_engine(const SessionConfig& cfg) {
    QGroupParams p{cfg.n, cfg.ell, cfg.y, cfg.z, cfg.restricted, cfg.height_bound};
    return QGroup::make(p, cfg.working_order);
}

void write_output(const SessionConfig& cfg, std::ostream& out, const json& j,
                  const std::string& text) {
    std::string payload =
        cfg.output_format == "json" ? j.dump(2) + "\n" : text + "\n";
    if (!cfg.output_path.empty()) {
        std::ofstream file(cfg.output_path);
        if (!file) throw std::runtime_error("cannot open output file " + cfg.output_path);
        file << payload;
        out << "wrote " << cfg.output_path << "\n";
    } else {
        out << payload;
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

RootVector parse_zeta(const std::string& s, int n) {
    std::vector<int> comp;
    for (const auto& part : split_list(s)) comp.push_back(std::stoi(part));
    if (static_cast<int>(comp.size()) != n - 1)
        throw std::invalid_argument("--zeta needs " + std::to_string(n - 1) + " components");
    return RootVector(comp);
}

ModuleAlgebra make_algebra(const std::shared_ptr<QGroup>& ctx, const SessionConfig& cfg,
                           const std::string& kind, bool star, int p,
                           const std::vector<std::string>& beta) {
    ModuleAlgebra out = [&]() -> ModuleAlgebra {
        if (kind == "natural") return natural_module(ctx);
        if (kind == "qplane") return quantum_plane(ctx, cfg.maxdeg);
        if (kind == "tensor") return tensor_algebra(natural_module(ctx), cfg.maxdeg);
        if (kind == "tensor-trunc") {
            if (p < 2) throw std::invalid_argument("--p >= 2 required for tensor-trunc");
            return truncate_ideal(tensor_algebra(natural_module(ctx), std::max(1, p - 1)), p);
        }
        if (kind == "downup") return downup_quotient(ctx, cfg.maxdeg);
        if (kind == "ysub") return y_submodule_quotient(ctx, cfg.maxdeg);
        if (kind == "smash") {
            std::vector<CycScalar> b;
            for (const auto& s : beta)
                b.push_back(eval_scalar(s, cfg.ell, cfg.working_order).cyc_value());
            if (b.empty()) b.assign(cfg.n - 1, CycScalar::one(cfg.ell));
            return smash_product(ctx, std::move(b), cfg.maxdeg);
        }
        throw std::invalid_argument("unknown algebra kind " + kind);
    }();
    if (star) return star_action(out);
    return out;
}

TwistElement load_twist(const std::shared_ptr<QGroup>& ctx, const std::string& source) {
    if (source == "builtin") {
        Pairing pairing(ctx);
        return twisting_element(pairing);
    }
    std::ifstream file(source);
    if (!file) throw std::runtime_error("cannot open twist file " + source);
    json j = json::parse(file);
    return twist_from_json(j, ctx);
}

int emit_report(const SessionConfig& cfg, std::ostream& out, const CheckReport& report) {
    write_output(cfg, out, report_to_json(report),
                 report.summary() + (report.all_pass() ? "all checks passed"
                                                       : std::to_string(report.failures()) +
                                                             " check(s) failed"));
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact computations with two-parameter quantum groups, Hopf pairings, "
                 "R-matrix factors, twisting elements and module-algebra deformations"};
    app.name("qdeform");
    app.require_subcommand(1);

    SessionConfig cfg;
    std::string config_path;

    std::string expr_text, left_text, right_text, zeta_text;
    std::string algebra_kind = "qplane", twist_source = "builtin", checks = "assoc,cocycle,udfdeg";
    std::string suites = "qybe,hexagon,twist,wef,moreids,hom";
    std::vector<std::string> beta;
    bool star = false;
    int p = 0, degcap = 3;

    CLI::App* build = app.add_subcommand("build", "parse an expression into the free algebra");
    add_common(build, cfg, config_path);
    build->add_option("--expr", expr_text, "expression to parse")->required();

    CLI::App* nf = app.add_subcommand("nf", "PBW normal form of an expression");
    add_common(nf, cfg, config_path);
    nf->add_option("--expr", expr_text, "expression to normalize")->required();

    CLI::App* pair_cmd = app.add_subcommand("pair", "Hopf pairing of two elements");
    add_common(pair_cmd, cfg, config_path);
    pair_cmd->add_option("--left", left_text, "element of U^{<=0}")->required();
    pair_cmd->add_option("--right", right_text, "element of U^{>=0}")->required();

    CLI::App* gram = app.add_subcommand("gram", "Gram matrix of one graded slice");
    add_common(gram, cfg, config_path);
    gram->add_option("--zeta", zeta_text, "degree, e.g. 1,0")->required();

    CLI::App* relprime = app.add_subcommand("relprime", "test the nondegeneracy criterion");
    add_common(relprime, cfg, config_path);

    CLI::App* twist = app.add_subcommand("twist", "construct the twisting element F");
    add_common(twist, cfg, config_path);

    CLI::App* algebra = app.add_subcommand("algebra", "build a catalog module algebra");
    add_common(algebra, cfg, config_path);
    algebra->add_option("--kind", algebra_kind,
                        "natural|qplane|tensor|tensor-trunc|downup|ysub|smash")
        ->required();
    algebra->add_option("--p", p, "truncation length for tensor-trunc");
    algebra->add_option("--beta", beta, "group character scalars for smash (e.g. -1, th)");
    algebra->add_flag("--star", star, "rescale the action by the t-character");

    CLI::App* deform = app.add_subcommand("deform", "twist a module algebra and run checks");
    add_common(deform, cfg, config_path);
    deform->add_option("--algebra", algebra_kind, "catalog algebra kind")->required();
    deform->add_option("--twist", twist_source, "builtin or a twist JSON file");
    deform->add_option("--checks", checks, "comma list: assoc,cocycle,udfdeg,modt");
    deform->add_option("--degcap", degcap, "exhaustive check degree cap");
    deform->add_option("--p", p, "truncation length for tensor-trunc");
    deform->add_option("--beta", beta, "group character scalars for smash");
    deform->add_flag("--star", star, "rescale the action by the t-character");

    CLI::App* verify = app.add_subcommand("verify", "run the identity suites");
    add_common(verify, cfg, config_path);
    verify->add_option("--suite", suites, "comma list: qybe,hexagon,twist,wef,moreids,hom");
    verify->add_option("--degcap", degcap, "degree cap for twist-identity inputs");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        for (CLI::App* sub : app.get_subcommands()) apply_config_file(sub, cfg, config_path);

        if (*relprime) {
            bool ok = check_relprime(cfg.n, cfg.y, cfg.z, cfg.ell);
            json j{{"schema", kSchemaTag},
                   {"kind", "relprime"},
                   {"n", cfg.n},
                   {"ell", cfg.ell},
                   {"y", cfg.y},
                   {"z", cfg.z},
                   {"relprime", ok}};
            write_output(cfg, out, j, ok ? "true" : "false");
            return 0;
        }

        auto ctx = make_engine(cfg);

        if (*build) {
            ExprAST ast = parse_expr(expr_text, cfg.n, cfg.ell);
            NCPoly poly = eval_expr(ast, *ctx);
            json terms = json::array();
            for (const auto& [w, c] : poly.terms())
                terms.push_back({{"coeff", c.to_string()}, {"word", w.to_string()}});
            json j{{"schema", kSchemaTag}, {"kind", "free_polynomial"}, {"terms", terms}};
            write_output(cfg, out, j, poly.to_string());
            return 0;
        }
        if (*nf) {
            ExprAST ast = parse_expr(expr_text, cfg.n, cfg.ell);
            AlgebraElement x = ctx->normal_form(eval_expr(ast, *ctx));
            json j = element_to_json(x);
            j["canonical"] = x.to_string();
            write_output(cfg, out, j, x.to_string());
            return 0;
        }
        if (*pair_cmd) {
            Pairing pairing(ctx);
            NCPoly lp = eval_expr(parse_expr(left_text, cfg.n, cfg.ell), *ctx);
            NCPoly rp = eval_expr(parse_expr(right_text, cfg.n, cfg.ell), *ctx);
            CycScalar v = pairing.pair_poly(lp, rp);
            json j{{"schema", kSchemaTag}, {"kind", "pairing"}, {"value", v.to_string()}};
            write_output(cfg, out, j, v.to_string());
            return 0;
        }
        if (*gram) {
            Pairing pairing(ctx);
            GramMatrix g = pairing.gram_plus(parse_zeta(zeta_text, cfg.n));
            json j = gram_to_json(g);
            bool invertible = g.entries.rows() == 0 || g.entries.inverse().has_value();
            j["invertible"] = invertible;
            std::ostringstream text;
            text << "degree " << g.degree.to_string() << ", dimension " << g.entries.rows()
                 << ", " << (invertible ? "invertible" : "singular");
            for (int r = 0; r < g.entries.rows(); ++r) {
                text << "\n" << g.minus_basis[r].to_string() << ":";
                for (int c = 0; c < g.entries.cols(); ++c)
                    text << " " << g.entries.at(r, c).to_string();
            }
            write_output(cfg, out, j, text.str());
            return 0;
        }
        if (*twist) {
            Pairing pairing(ctx);
            TwistElement f = twisting_element(pairing);
            json j = twist_to_json(f);
            std::ostringstream text;
            text << "twisting element with " << f.components.size() << " components";
            for (const auto& [zeta, comp] : f.components)
                text << "\n  " << zeta.to_string() << ": " << comp.to_string();
            write_output(cfg, out, j, text.str());
            return 0;
        }
        if (*algebra) {
            ModuleAlgebra a = make_algebra(ctx, cfg, algebra_kind, star, p, beta);
            json j = algebra_to_json(a);
            std::ostringstream text;
            text << a.kind() << " with " << a.size() << " basis labels up to degree "
                 << a.maxdeg();
            write_output(cfg, out, j, text.str());
            return 0;
        }
        if (*deform) {
            auto a = std::make_shared<ModuleAlgebra>(
                make_algebra(ctx, cfg, algebra_kind, star, p, beta));
            TwistElement f = load_twist(ctx, twist_source);
            DeformedProduct d = twisted_product(a, f, cfg.working_order);
            CheckReport report;
            for (const auto& which : split_list(checks)) {
                if (which == "assoc") {
                    report.merge(check_associativity(d, degcap));
                } else if (which == "modt") {
                    report.merge(check_mod_t(d, degcap));
                } else if (which == "cocycle") {
                    report.merge(check_mod_t(d, degcap));
                    BilinearMap mu1 = [&d](int x, int y) { return d.coefficient(1, x, y); };
                    report.merge(check_hochschild_cocycle(mu1, *a, degcap));
                } else if (which == "udfdeg") {
                    report.merge(check_udf_degree(f, *a));
                } else {
                    throw std::invalid_argument("unknown check " + which);
                }
            }
            return emit_report(cfg, out, report);
        }
        if (*verify) {
            Pairing pairing(ctx);
            TwistElement f = twisting_element(pairing);
            auto v = std::make_shared<ModuleAlgebra>(natural_module(ctx));
            CheckReport report;
            for (const auto& which : split_list(suites)) {
                if (which == "qybe") {
                    report.merge(check_qybe(v, v, v, f, pairing));
                } else if (which == "hexagon") {
                    report.merge(check_hexagon(v, v, v, f, pairing));
                } else if (which == "hom") {
                    report.merge(check_module_hom(braiding(v, v, f, pairing)));
                } else if (which == "twist") {
                    auto qp = std::make_shared<ModuleAlgebra>(
                        quantum_plane(ctx, std::max(cfg.maxdeg, degcap)));
                    report.merge(check_twist_identity(f, qp, qp, qp, degcap));
                } else if (which == "wef") {
                    for (const auto& zeta : ctx->truncated_degrees()) {
                        if (zeta.is_zero()) continue;
                        for (int i = 1; i <= cfg.n - 1; ++i)
                            report.merge(check_wef(zeta, i, v, v, f));
                    }
                } else if (which == "moreids") {
                    for (const auto& gamma : ctx->truncated_degrees())
                        report.merge(check_moreids(gamma, v, v, v, f, pairing));
                } else {
                    throw std::invalid_argument("unknown suite " + which);
                }
            }
            return emit_report(cfg, out, report);
        }
        err << "no subcommand selected\n";
        return 2;
    } catch (const ParseError& e) {
        err << "expression error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace qdeform
