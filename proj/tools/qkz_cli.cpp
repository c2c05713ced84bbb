// command-line front end: evaluation, integration, exact reduction, and the
// verification / limit suites, emitting JSON reports with a fixed schema
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qkz/config.hpp"
#include "qkz/homology.hpp"
#include "qkz/qkz.hpp"
#include "qkz/reduction.hpp"
#include "qkz/report.hpp"

using nlohmann::json;
using namespace qkz;

namespace {

RunConfig load_run_config(const std::string& path) {
    if (path.empty()) {
        KeyValueConfig empty;
        return RunConfig::from_kv(empty);
    }
    return RunConfig::from_kv(KeyValueConfig::load(path));
}

// exact view of the configured parameters (doubles are dyadic rationals, so
// the conversion is exact)
ExactParams exact_of(const ParameterSet& P) {
    std::vector<mpq_class> z, al;
    for (double v : P.z) z.emplace_back(v);
    for (double v : P.a_imag) al.emplace_back(v);
    return ExactParams::make_imag(z, al, mpq_class(P.p_imag));
}

RationalFunction rf_from_json(const json& j) {
    RationalFunction f;
    if (j.contains("poly")) {
        long k = 0;
        for (auto& c : j["poly"]) f.add_poly(k++, GQ::parse(c.get<std::string>()));
    }
    if (j.contains("poles"))
        for (auto& P : j["poles"]) {
            GQ loc = GQ::parse(P.at("loc").get<std::string>());
            int order = 1;
            for (auto& c : P.at("coeffs")) f.add_pole(loc, GQ::parse(c.get<std::string>()), order++);
        }
    f.normalize();
    return f;
}

json rf_to_json(const RationalFunction& f) {
    json j;
    j["poly"] = json::array();
    for (long k = 0; k <= f.poly_degree(); ++k) {
        GQ c;
        auto it = f.poly.find(k);
        if (it != f.poly.end()) c = it->second;
        j["poly"].push_back(c.str());
    }
    j["poles"] = json::array();
    for (auto& P : f.poles) {
        json pj;
        pj["loc"] = P.loc.str();
        pj["coeffs"] = json::array();
        for (auto& c : P.coeffs) pj["coeffs"].push_back(c.str());
        j["poles"].push_back(pj);
    }
    return j;
}

std::vector<long> parse_s_list(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
    return out;
}

void print_report(const CheckReport& rep) { std::cout << to_json(rep).dump(2) << "\n"; }

// random generic exact parameters (small rationals, collision-checked)
ExactParams random_exact(std::mt19937_64& rng, int n) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<mpq_class> z, al;
        long zprev = 0;
        for (int l = 0; l < n; ++l) {
            zprev += 1 + static_cast<long>(rng() % 3);
            z.emplace_back(zprev);
            mpq_class a(1 + static_cast<long>(rng() % 7), 10 + static_cast<long>(rng() % 9));
            a.canonicalize(); // GMP comparisons require canonical form
            al.push_back(std::move(a));
        }
        try {
            ExactParams P = ExactParams::make_imag(z, al, mpq_class(1));
            check_genericity(P);
            return P;
        } catch (const GenericityError&) {
        }
    }
    throw GenericityError("failed to sample generic parameters");
}

int run_suite(const RunConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<CheckReport> bundle;
    auto record = [&](CheckReport rep) {
        std::ofstream out(cfg.output_dir + "/report_" + rep.check + "_" +
                          std::to_string(bundle.size()) + ".json");
        out << to_json(rep).dump(2) << "\n";
        bundle.push_back(std::move(rep));
    };
    for (const std::string& check : cfg.suite) {
        try {
            if (check == "barnes") {
                record(barnes_check({0.5, 0}, {0.5, 0}, {0.5, 0}, {0.5, 0}, cfg.spec));
            } else if (check == "qdet") {
                record(qdet_check(cfg.params, cfg.spec));
            } else if (check == "classical-det") {
                record(classical_det_check(cfg.params, cfg.spec, 1e-8));
            } else if (check == "qkz") {
                record(verify_qkz(exact_of(cfg.params), cfg.spec));
            } else if (check == "flatness") {
                record(flatness_check(random_exact(rng, cfg.params.n)));
            } else if (check == "reduction-roundtrip") {
                ExactParams P = random_exact(rng, cfg.params.n);
                CheckReport rep;
                rep.check = "reduction-roundtrip";
                rep.n = P.n;
                rep.params = {{"exact", true}};
                rep.pass = true;
                for (int j = 1; j <= P.n - 1; ++j) {
                    auto cls = reduce(weight_w_exact(P, j), P);
                    for (int i = 0; i < P.n - 1; ++i)
                        if (cls.coords[static_cast<size_t>(i)] != GQ(i + 1 == j ? 1 : 0))
                            rep.pass = false;
                }
                rep.lhs = rep.rhs = ScaledComplex{cplx{1.0, 0.0}, 0.0};
                record(std::move(rep));
            } else if (check == "limits") {
                auto r = scalar_limit_check(mpq_class(1, 4), mpq_class(1), {10, 20, 40, 80});
                CheckReport rep;
                rep.check = "limits";
                rep.n = cfg.params.n;
                rep.params = {{"a", "1/4 i"}, {"p", "i"}};
                rep.extra["slope"] = r.order;
                rep.rel_err = r.recurrence_err;
                rep.tol = 1e-10;
                rep.pass = r.recurrence_err <= 1e-10 && std::abs(r.order - 1.0) <= 0.2;
                rep.lhs = rep.rhs = ScaledComplex{cplx{1.0, 0.0}, 0.0};
                record(std::move(rep));
            } else {
                throw ConfigError("unknown suite check: " + check);
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            CheckReport rep;
            rep.check = check;
            rep.pass = false;
            rep.extra["error"] = e.what();
            bundle.push_back(std::move(rep));
        }
    }
    emit_csv(bundle, cfg.output_dir + "/summary.csv");
    json summary;
    summary["checks"] = json::array();
    bool all = true;
    for (auto& r : bundle) {
        summary["checks"].push_back({{"check", r.check}, {"pass", r.pass}});
        all = all && r.pass;
    }
    summary["pass"] = all;
    std::ofstream out(cfg.output_dir + "/summary.json");
    out << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypergeometric solutions of rational qKZ difference equations"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value parameter file");

    std::string w_arg, t_arg = "0", input_path, s_list = "10,20,40,80", which;
    int m_arg = 1, j_arg = 1, ell_arg = 1, ellp_arg = 1, depth = 5;
    bool dual = false, as_json = false;

    auto* gamma_cmd = app.add_subcommand("gamma", "log-gamma of a complex argument");
    gamma_cmd->add_option("--w", w_arg, "argument, format <re>(+|-)<im>i")->required();

    auto* phip_cmd = app.add_subcommand("phi-p", "p-deformed master function");
    phip_cmd->add_subcommand("eval")->add_option("--t", t_arg)->required();

    auto* phi_cmd = app.add_subcommand("phi", "classical master function");
    phi_cmd->add_subcommand("eval")->add_option("--t", t_arg)->required();

    auto* w_cmd = app.add_subcommand("weights", "basis weight functions w_j");
    auto* w_eval = w_cmd->add_subcommand("eval");
    w_eval->add_option("--j", j_arg)->required();
    w_eval->add_option("--t", t_arg)->required();

    auto* lat_cmd = app.add_subcommand("lattice", "singularity lattices");
    auto* lat_list = lat_cmd->add_subcommand("list");
    lat_list->add_flag("--dual", dual);
    lat_list->add_option("--depth", depth);

    auto* int_cmd = app.add_subcommand("integrate", "quadrature entries");
    auto* int_theta = int_cmd->add_subcommand("theta-entry");
    int_theta->add_option("--m", m_arg)->required();
    int_theta->add_option("--j", j_arg)->required();
    auto* int_cl = int_cmd->add_subcommand("classical");
    int_cl->add_option("--m", m_arg)->required();
    int_cl->add_option("--ell", ell_arg)->required();

    auto* red_cmd = app.add_subcommand("reduce", "exact cohomology reduction");
    red_cmd->add_option("--input", input_path, "rational-function JSON file")->required();

    auto* beta_cmd = app.add_subcommand("beta", "connection matrix beta_ell");
    beta_cmd->add_option("--ell", ell_arg)->required();

    auto* theta_cmd = app.add_subcommand("theta", "solution matrix Theta");
    theta_cmd->add_flag("--json", as_json);

    auto* verify_cmd = app.add_subcommand("verify", "identity checks");
    verify_cmd->add_option("which", which, "qdet|classical-det|barnes|qkz|flatness")->required();
    std::string ell_sel = "all";
    verify_cmd->add_option("--ell", ell_sel);

    auto* limits_cmd = app.add_subcommand("limits", "continuum-limit checks");
    std::string limit_kind;
    limits_cmd->add_option("kind", limit_kind, "kz|gm|scalar")->required();
    limits_cmd->add_option("--s", s_list);
    limits_cmd->add_option("--m", m_arg);
    limits_cmd->add_option("--ell", ell_arg);
    limits_cmd->add_option("--ellp", ellp_arg);

    app.add_subcommand("suite", "run the configured check suite");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_run_config(config_path);
        const ParameterSet& P = cfg.params;

        if (gamma_cmd->parsed()) {
            std::cout << format_complex(log_gamma(parse_complex(w_arg))) << "\n";
        } else if (phip_cmd->parsed()) {
            std::cout << format_complex(log_phi_p(parse_complex(t_arg), P)) << "\n";
        } else if (phi_cmd->parsed()) {
            std::cout << format_complex(log_phi_classical(parse_complex(t_arg).real(), P)) << "\n";
        } else if (w_cmd->parsed()) {
            std::cout << format_complex(weight_w(j_arg, parse_complex(t_arg), P)) << "\n";
        } else if (lat_cmd->parsed()) {
            auto L = SingularLattice::build(P, dual ? LatticeKind::SingDual : LatticeKind::Sing,
                                            depth);
            for (auto& pt : L.points)
                std::printf("%s  ell=%d sign=%+d N=%d\n", format_complex(pt.t).c_str(), pt.ell,
                            pt.sign, pt.N);
        } else if (int_cmd->parsed()) {
            IntegralResult r = int_theta->parsed()
                                   ? theta_entry(m_arg, j_arg, P, cfg.spec)
                                   : classical_component(P, IntervalCycle{m_arg}, ell_arg, cfg.spec);
            json j = {{"value", format_complex(r.value)},
                      {"error_estimate", r.error_estimate},
                      {"panels", r.panels_used},
                      {"truncation_radius", r.truncation_radius}};
            std::cout << j.dump(2) << "\n";
        } else if (red_cmd->parsed()) {
            std::ifstream in(input_path);
            if (!in) throw IoError("cannot open input: " + input_path);
            json j = json::parse(in);
            ExactParams EP = exact_of(P);
            CohomologyClass cls = reduce(rf_from_json(j), EP);
            json out;
            out["coords"] = json::array();
            for (auto& c : cls.coords) out["coords"].push_back(c.str());
            out["certificate"] = rf_to_json(cls.cert);
            std::cout << out.dump(2) << "\n";
        } else if (beta_cmd->parsed()) {
            ConnectionMatrix B = beta_matrix(exact_of(P), ell_arg);
            json out = json::array();
            for (auto& row : B.entries) {
                json r = json::array();
                for (auto& v : row) r.push_back(v.str());
                out.push_back(r);
            }
            std::cout << out.dump(2) << "\n";
        } else if (theta_cmd->parsed()) {
            SolutionMatrix S = theta(P, cfg.spec);
            json out;
            out["entries"] = json::array();
            for (size_t i = 0; i < S.entries.size(); ++i) {
                json row = json::array();
                for (size_t j2 = 0; j2 < S.entries[i].size(); ++j2)
                    row.push_back({{"value", format_complex(S.entries[i][j2])},
                                   {"error", S.errors[i][j2]}});
                out["entries"].push_back(row);
            }
            if (!S.warnings.empty()) out["conditioning_warning"] = S.warnings[0].cond;
            std::cout << out.dump(2) << "\n";
        } else if (verify_cmd->parsed()) {
            if (which == "qdet")
                print_report(qdet_check(P, cfg.spec));
            else if (which == "classical-det")
                print_report(classical_det_check(P, cfg.spec, P.n <= 2 ? 1e-10 : 1e-8));
            else if (which == "barnes")
                print_report(barnes_check({0.5, 0}, {0.5, 0}, {0.5, 0}, {0.5, 0}, cfg.spec));
            else if (which == "qkz")
                print_report(verify_qkz(exact_of(P), cfg.spec));
            else if (which == "flatness")
                print_report(flatness_check(exact_of(P)));
            else
                throw ConfigError("unknown verify target: " + which);
        } else if (limits_cmd->parsed()) {
            auto S = parse_s_list(s_list);
            std::vector<mpq_class> Z, al;
            for (double v : P.z) Z.emplace_back(v);
            for (double v : P.a_imag) al.emplace_back(v);
            json out;
            if (limit_kind == "scalar") {
                auto r = scalar_limit_check(al[0], mpq_class(P.p_imag), S);
                out = {{"recurrence_err", r.recurrence_err}, {"slope", r.order}};
            } else if (limit_kind == "gm") {
                auto errs = gm_limit_errors(Z, al, mpq_class(P.p_imag), m_arg, ell_arg, ellp_arg,
                                            S, cfg.spec);
                std::vector<double> Sd(S.begin(), S.end());
                out = {{"errors", errs}, {"slope", -loglog_slope(Sd, errs)}};
            } else if (limit_kind == "kz") {
                std::vector<std::vector<mpq_class>> configs = {Z};
                for (long off : {1, 2}) {
                    std::vector<mpq_class> Z2 = Z;
                    for (size_t k = 1; k < Z2.size(); ++k) Z2[k] += mpq_class(off, 3) * static_cast<long>(k);
                    configs.push_back(Z2);
                }
                auto r = kz_limit_fit(configs, al, mpq_class(P.p_imag), S);
                out = {{"slope", r.order},
                       {"decomposition_resid", r.decomposition_resid},
                       {"convergence", r.convergence}};
            } else {
                throw ConfigError("unknown limits kind: " + limit_kind);
            }
            std::cout << out.dump(2) << "\n";
        } else if (app.get_subcommand("suite")->parsed()) {
            return run_suite(cfg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
