#ifndef QKZ_REPORT_HPP
#define QKZ_REPORT_HPP

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkz/complex.hpp"
#include "qkz/errors.hpp"
#include "qkz/params.hpp"

namespace qkz {

struct QuadratureStats {
    int panels = 0;
    double truncation_radius = 0.0;
    double est_error = 0.0;

    void absorb(int p, double r, double e) {
        panels += p;
        truncation_radius = std::max(truncation_radius, r);
        est_error += e;
    }
};

// one verification report; serialized with the fixed schema
struct CheckReport {
    std::string check;
    int n = 0;
    nlohmann::json params;
    ScaledComplex lhs;
    ScaledComplex rhs;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tol = 0.0;
    bool pass = false;
    QuadratureStats quadrature;
    nlohmann::json extra; // fit fields etc., merged into the object

    // pass when within tolerance; an honest quadrature-noise allowance
    // (10x the propagated error estimate) avoids false failures
    void finish_from_scaled(double tolerance, double propagated_rel = 0.0) {
        tol = tolerance;
        cplx dlog{lhs.log_abs() - rhs.log_abs(), wrap_angle(lhs.arg() - rhs.arg())};
        rel_err = std::abs(std::exp(dlog) - 1.0);
        abs_err = rel_err * std::exp(rhs.log_abs());
        pass = rel_err <= tol || (propagated_rel > 0.0 && rel_err <= 10.0 * propagated_rel);
    }
};

inline nlohmann::json params_json(const ParameterSet& P) {
    nlohmann::json j;
    j["n"] = P.n;
    j["z"] = P.z;
    j["a_imag"] = P.a_imag;
    j["p_imag"] = P.p_imag;
    j["kappa"] = {P.kappa.real(), P.kappa.imag()};
    return j;
}

inline nlohmann::json to_json(const CheckReport& r) {
    nlohmann::json j;
    j["check"] = r.check;
    j["n"] = r.n;
    j["params"] = r.params;
    j["lhs"] = {{"log_abs", r.lhs.log_abs()}, {"arg", r.lhs.arg()}};
    j["rhs"] = {{"log_abs", r.rhs.log_abs()}, {"arg", r.rhs.arg()}};
    j["abs_err"] = r.abs_err;
    j["rel_err"] = r.rel_err;
    j["tol"] = r.tol;
    j["pass"] = r.pass;
    j["quadrature"] = {{"panels", r.quadrature.panels},
                       {"truncation_radius", r.quadrature.truncation_radius},
                       {"est_error", r.quadrature.est_error}};
    for (auto& [k, v] : r.extra.items()) j[k] = v;
    return j;
}

inline std::string param_hash(const nlohmann::json& params) {
    // stable FNV-1a over the canonical dump
    std::string s = params.dump();
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

// per-check CSV with stable column order (check, n, param_hash, rel_err, tol, pass)
inline void emit_csv(const std::vector<CheckReport>& bundle, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open CSV output: " + path);
    out << "check,n,param_hash,rel_err,tol,pass\n";
    for (auto& r : bundle) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", r.rel_err);
        out << r.check << ',' << r.n << ',' << param_hash(r.params) << ',' << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.tol);
        out << buf << ',' << (r.pass ? "true" : "false") << '\n';
    }
    if (!out) throw IoError("CSV write failed: " + path);
}

} // namespace qkz

#endif
