#ifndef QKZ_QKZ_HPP
#define QKZ_QKZ_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "qkz/homology.hpp"
#include "qkz/linalg.hpp"
#include "qkz/master.hpp"
#include "qkz/params.hpp"
#include "qkz/quadrature.hpp"
#include "qkz/reduction.hpp"
#include "qkz/report.hpp"

namespace qkz {

inline CMatrix to_cmatrix(const GMatrix& A) {
    CMatrix M(A.size());
    for (size_t i = 0; i < A.size(); ++i)
        for (auto& v : A[i]) M[i].push_back(v.to_cplx());
    return M;
}

// ---------------------------------------------------------------------------
// the difference system: Theta(z + p e_l) = Theta(z) beta_l(z)

inline CheckReport verify_qkz(const ExactParams& P, const QuadratureSpec& spec,
                              double tol = 1e-6) {
    ParameterSet params = P.to_floating();
    SolutionMatrix base = theta(params, spec);
    double base_norm = frobenius(base.entries);
    double base_err = 0.0;
    for (auto& row : base.errors)
        for (double e : row) base_err += e;

    CheckReport rep;
    rep.check = "qkz";
    rep.n = params.n;
    rep.params = params_json(params);
    rep.quadrature = base.quadrature;
    double worst = 0.0;
    nlohmann::json residuals = nlohmann::json::array();
    for (int ell = 1; ell <= P.n; ++ell) {
        ConnectionMatrix B = beta_matrix(P, ell);
        SolutionMatrix shifted = theta_shifted(params, ell, spec);
        CMatrix pred = cmat_mul(base.entries, to_cmatrix(B.entries));
        double resid = frobenius(cmat_sub(shifted.entries, pred)) / base_norm;
        residuals.push_back(resid);
        worst = std::max(worst, resid);
        rep.quadrature.absorb(shifted.quadrature.panels, shifted.quadrature.truncation_radius,
                              shifted.quadrature.est_error);
    }
    rep.extra["residuals"] = residuals;
    rep.lhs = ScaledComplex{cplx{1.0 + worst, 0.0}, 0.0}.normalize();
    rep.rhs = ScaledComplex{cplx{1.0, 0.0}, 0.0};
    rep.finish_from_scaled(tol, (base_err / base_norm));
    rep.rel_err = worst;
    rep.pass = worst <= tol;
    return rep;
}

// exact flatness: beta_l(z) beta_m(z + p e_l) = beta_m(z) beta_l(z + p e_m)
inline CheckReport flatness_check(const ExactParams& P) {
    CheckReport rep;
    rep.check = "flatness";
    rep.n = P.n;
    rep.params = {{"exact", true}, {"n", P.n}};
    rep.pass = true;
    rep.tol = 0.0;
    for (int l = 1; l <= P.n && rep.pass; ++l)
        for (int m = l + 1; m <= P.n && rep.pass; ++m) {
            GMatrix lhs = gq_matmul(beta_matrix(P, l).entries,
                                    beta_matrix(P.shifted(l - 1), m).entries);
            GMatrix rhs = gq_matmul(beta_matrix(P, m).entries,
                                    beta_matrix(P.shifted(m - 1), l).entries);
            for (size_t i = 0; i < lhs.size(); ++i)
                for (size_t j = 0; j < lhs.size(); ++j)
                    if (!(lhs[i][j] == rhs[i][j])) {
                        rep.pass = false;
                        rep.extra["offending"] = {{"ell", l}, {"m", m}, {"row", i}, {"col", j},
                                                  {"lhs", lhs[i][j].str()}, {"rhs", rhs[i][j].str()}};
                        rep.rel_err = 1.0;
                    }
        }
    rep.lhs = ScaledComplex{cplx{1.0, 0.0}, 0.0};
    rep.rhs = ScaledComplex{cplx{1.0, 0.0}, 0.0};
    return rep;
}

// ---------------------------------------------------------------------------
// R-matrix plumbing

struct RProvider {
    std::vector<size_t> dims; // dims[i] = dim V_{i+1}
    // R_{V_i,V_j}(x) on V_i tensor V_j (row-major over (v_i, v_j) pairs);
    // normalized so the highest-weight line v_i @ v_j is fixed
    std::function<CMatrix(int i, int j, cplx x)> eval;

    size_t dim(int i) const {
        if (i < 1 || static_cast<size_t>(i) > dims.size()) throw ShapeError("RProvider index");
        return dims[static_cast<size_t>(i - 1)];
    }
};

inline double yang_baxter_check(const RProvider& R, int i, int j, int k, cplx x, cplx y) {
    std::vector<size_t> d{R.dim(i), R.dim(j), R.dim(k)};
    auto Rij = apply_on_legs(R.eval(i, j, x), d, 0, 1);
    auto Rik = apply_on_legs(R.eval(i, k, x + y), d, 0, 2);
    auto Rjk = apply_on_legs(R.eval(j, k, y), d, 1, 2);
    CMatrix lhs = cmat_mul(cmat_mul(Rij, Rik), Rjk);
    CMatrix rhs = cmat_mul(cmat_mul(Rjk, Rik), Rij);
    return frobenius(cmat_sub(lhs, rhs));
}

// K_m = R_{m,m-1}(z_m-z_{m-1}+p) ... R_{m,1}(z_m-z_1+p)
//       R_{m,n}(z_m-z_n) ... R_{m,m+1}(z_m-z_{m+1}), as an ordered product
inline CMatrix assemble_K(const RProvider& R, const ParameterSet& params, int m) {
    if (static_cast<int>(R.dims.size()) != params.n) throw ShapeError("assemble_K leg count");
    params.throw_if_bad_index(m - 1);
    size_t total = 1;
    for (size_t d : R.dims) total *= d;
    CMatrix K = cmat_identity(total);
    auto mul_factor = [&](int other, cplx arg) {
        CMatrix F = apply_on_legs(R.eval(m, other, arg), R.dims, static_cast<size_t>(m - 1),
                                  static_cast<size_t>(other - 1));
        K = cmat_mul(K, F);
    };
    for (int j = m - 1; j >= 1; --j)
        mul_factor(j, params.zc(m - 1) - params.zc(j - 1) + params.p());
    for (int j = params.n; j >= m + 1; --j) mul_factor(j, params.zc(m - 1) - params.zc(j - 1));
    return K;
}

// the rational sl2 R-matrix on C^2 tensor C^2, normalized on the
// highest-weight line: R(x) = (x Id + P)/(x + 1)
inline RProvider rational_R_provider(int n) {
    RProvider R;
    R.dims.assign(static_cast<size_t>(n), 2);
    R.eval = [](int, int, cplx x) -> CMatrix {
        if (x == cplx{-1.0, 0.0}) throw DomainError("rational R-matrix pole at x = -1");
        CMatrix M(4, CVector(4));
        cplx d = x + 1.0;
        M[0][0] = M[3][3] = 1.0;
        M[1][1] = M[2][2] = x / d;
        M[1][2] = M[2][1] = 1.0 / d;
        return M;
    };
    return R;
}

// ---------------------------------------------------------------------------
// continuum limits

struct LimitSweep {
    std::vector<mpq_class> Z; // base configuration (exact, strictly increasing)
    std::vector<long> S;      // strictly increasing scales, >= 2 octaves
    void validate() const {
        if (S.size() < 3) throw ConfigError("limit sweep needs >= 3 scales");
        for (size_t k = 0; k + 1 < S.size(); ++k)
            if (!(S[k] < S[k + 1])) throw ConfigError("S values must increase");
        if (!(static_cast<double>(S.back()) / static_cast<double>(S.front()) >= 4.0))
            throw ConfigError("limit sweep needs >= 2 octaves of range");
    }
};

// per-entry 3-term fit f(S) = f_inf + C/S + D/S^2 over the sweep; returns f_inf
inline double richardson_fit(const std::vector<double>& Svals, const std::vector<double>& f) {
    std::vector<std::vector<double>> X;
    for (double S : Svals) X.push_back({1.0, 1.0 / S, 1.0 / (S * S)});
    return least_squares(X, f)[0];
}

struct KzLimitResult {
    // fitted residue matrices N[l][j] ((n-1)x(n-1) complex), l,j 1..n, j != l
    std::vector<std::vector<CMatrix>> N;
    double decomposition_resid = 0.0; // relative, across configurations
    double order = 0.0;               // empirical remainder order in 1/S
    std::vector<double> convergence;  // ||M(S) - M(inf)|| per S (first config)
};

// fit of S (beta_l(SZ) - 1) across a sweep and >= 3 base configurations
inline KzLimitResult kz_limit_fit(const std::vector<std::vector<mpq_class>>& configs,
                                  const std::vector<mpq_class>& al, const mpq_class& q,
                                  const std::vector<long>& Svals) {
    if (configs.size() < 3) throw FitError("kz_limit_fit needs >= 3 base configurations");
    size_t n = configs[0].size();
    size_t d = n - 1;
    std::vector<double> Sd(Svals.begin(), Svals.end());

    // Minf[c][l] = fitted limit matrix of S (beta_{l+1}(S Z_c) - 1)
    std::vector<std::vector<CMatrix>> Minf(configs.size());
    std::vector<std::vector<std::vector<CMatrix>>> Mall(configs.size()); // [c][sidx][l]
    for (size_t c = 0; c < configs.size(); ++c) {
        Mall[c].resize(Svals.size());
        for (size_t si = 0; si < Svals.size(); ++si) {
            std::vector<mpq_class> z;
            for (auto& Zm : configs[c]) z.push_back(mpq_class(Svals[si]) * Zm);
            ExactParams P = ExactParams::make_imag(z, std::vector<mpq_class>(al), q);
            for (size_t l = 0; l < n; ++l) {
                CMatrix M = to_cmatrix(beta_matrix(P, static_cast<int>(l) + 1).entries);
                for (size_t i = 0; i < d; ++i) {
                    M[i][i] -= 1.0;
                    for (size_t j = 0; j < d; ++j) M[i][j] *= static_cast<double>(Svals[si]);
                }
                Mall[c][si].push_back(M);
            }
        }
        Minf[c].resize(n);
        for (size_t l = 0; l < n; ++l) {
            CMatrix lim(d, CVector(d));
            for (size_t i = 0; i < d; ++i)
                for (size_t j = 0; j < d; ++j) {
                    std::vector<double> re, im;
                    for (size_t si = 0; si < Svals.size(); ++si) {
                        re.push_back(Mall[c][si][l][i][j].real());
                        im.push_back(Mall[c][si][l][i][j].imag());
                    }
                    lim[i][j] = {richardson_fit(Sd, re), richardson_fit(Sd, im)};
                }
            Minf[c][l] = lim;
        }
    }

    KzLimitResult out;
    // solve Minf[c][l] = sum_{j != l} N[l][j] / (Z_l - Z_j) entrywise across configs
    out.N.assign(n, std::vector<CMatrix>(n));
    double resid2 = 0.0, scale2 = 0.0;
    for (size_t l = 0; l < n; ++l) {
        for (size_t i = 0; i < d; ++i)
            for (size_t jj = 0; jj < d; ++jj) {
                std::vector<std::vector<double>> X;
                std::vector<double> yr, yi;
                for (size_t c = 0; c < configs.size(); ++c) {
                    std::vector<double> row;
                    for (size_t j = 0; j < n; ++j) {
                        if (j == l) continue;
                        row.push_back(1.0 / (configs[c][l].get_d() - configs[c][j].get_d()));
                    }
                    X.push_back(row);
                    yr.push_back(Minf[c][l][i][jj].real());
                    yi.push_back(Minf[c][l][i][jj].imag());
                }
                auto br = least_squares(X, yr);
                auto bi = least_squares(X, yi);
                size_t col = 0;
                for (size_t j = 0; j < n; ++j) {
                    if (j == l) continue;
                    if (out.N[l][j].empty()) out.N[l][j].assign(d, CVector(d));
                    out.N[l][j][i][jj] = {br[col], bi[col]};
                    ++col;
                }
                for (size_t c = 0; c < configs.size(); ++c) {
                    cplx fit{0.0, 0.0};
                    size_t cc = 0;
                    for (size_t j = 0; j < n; ++j) {
                        if (j == l) continue;
                        fit += out.N[l][j][i][jj] * X[c][cc++];
                    }
                    resid2 += std::norm(fit - Minf[c][l][i][jj]);
                    scale2 += std::norm(Minf[c][l][i][jj]);
                }
            }
    }
    out.decomposition_resid = std::sqrt(resid2 / std::max(scale2, 1e-300));

    // empirical remainder order from the first configuration, l = 1
    std::vector<double> devs;
    for (size_t si = 0; si < Svals.size(); ++si)
        devs.push_back(frobenius(cmat_sub(Mall[0][si][0], Minf[0][0])));
    out.convergence = devs;
    size_t tail = std::min<size_t>(3, Svals.size());
    std::vector<double> xs(Sd.end() - static_cast<long>(tail), Sd.end());
    std::vector<double> ys(devs.end() - static_cast<long>(tail), devs.end());
    out.order = -loglog_slope(xs, ys);
    return out;
}

// ratio test against classical interval integrals; the unknown scalar
// prefactor C_m(S, p) cancels in the ratio
inline std::vector<double> gm_limit_errors(const std::vector<mpq_class>& Z,
                                           const std::vector<mpq_class>& al, const mpq_class& q,
                                           int m, int ell, int ellp,
                                           const std::vector<long>& Svals,
                                           const QuadratureSpec& spec) {
    size_t n = Z.size();
    // classical side at scale 1: exponents 2 a_j / p = 2 al_j / q (kappa = p/2)
    ParameterSet cl;
    cl.n = static_cast<int>(n);
    for (auto& Zm : Z) cl.z.push_back(Zm.get_d());
    for (auto& av : al) cl.a_imag.push_back(av.get_d());
    cl.p_imag = q.get_d();
    cl.kappa = cl.p() / 2.0;
    cl.validate();
    cplx num = classical_component(cl, IntervalCycle{m}, ell, spec).value;
    cplx den = classical_component(cl, IntervalCycle{m}, ellp, spec).value;
    cplx ratio_classical = num / den;

    std::vector<double> errs;
    for (long S : Svals) {
        ParameterSet ps = cl;
        for (auto& zv : ps.z) zv *= static_cast<double>(S);
        cplx tn = theta_entry(m, ell, ps, spec).value;
        cplx td = theta_entry(m, ellp, ps, spec).value;
        errs.push_back(std::abs(tn / td - ratio_classical));
    }
    return errs;
}

// the scalar equation y(t+p) = (t+a)/(t-a) y(t) and its continuum limit
inline cplx scalar_y(cplx t, cplx a, cplx p) {
    return std::exp(log_gamma((t + a) / p) + log_gamma(1.0 - (t - a) / p) - pi * iu * t / p);
}

struct ScalarLimitResult {
    double recurrence_err = 0.0; // worst relative error of the exact recurrence
    double order = 0.0;          // empirical order of the log-derivative limit
    std::vector<double> devs;
};

inline ScalarLimitResult scalar_limit_check(const mpq_class& al, const mpq_class& q,
                                            const std::vector<long>& Svals) {
    cplx a{0.0, al.get_d()};
    cplx p{0.0, q.get_d()};
    ScalarLimitResult out;
    for (double t : {0.37, -1.21, 2.63, 0.05}) {
        cplx lhs = scalar_y(cplx{t, 0.0} + p, a, p);
        cplx rhs = (cplx{t, 0.0} + a) / (cplx{t, 0.0} - a) * scalar_y(cplx{t, 0.0}, a, p);
        out.recurrence_err = std::max(out.recurrence_err, std::abs(lhs - rhs) / std::abs(rhs));
    }
    const double T = 1.3;
    cplx target = (2.0 * a / p) / T;
    for (long S : Svals) {
        double h = 1e-4;
        cplx lo = std::log(scalar_y(cplx{static_cast<double>(S) * (T - h), 0.0}, a, p));
        cplx hi = std::log(scalar_y(cplx{static_cast<double>(S) * (T + h), 0.0}, a, p));
        // d/dT log Y(T) with Y(T) = y(ST); unwrap the branch across the step
        cplx dlog = (hi - lo);
        dlog = {dlog.real(), wrap_angle(dlog.imag())};
        cplx deriv = dlog / (2.0 * h);
        // this solution carries the p-periodic prefactor e^{-2 pi t / Im p}
        // (transparent to the difference equation); quotient out its
        // log-derivative before comparing against the classical power law
        deriv += 2.0 * pi * static_cast<double>(S) / q.get_d();
        out.devs.push_back(std::abs(deriv - target));
    }
    std::vector<double> Sd(Svals.begin(), Svals.end());
    out.order = -loglog_slope(Sd, out.devs);
    return out;
}

// max-deviation of S w_j(SZ, ST) from 1/(T - Z_j) over a T grid, per S
inline std::vector<double> w_limit_devs(const std::vector<mpq_class>& Z,
                                        const std::vector<mpq_class>& al, const mpq_class& q,
                                        int j, const std::vector<long>& Svals) {
    ParameterSet base;
    base.n = static_cast<int>(Z.size());
    for (auto& Zm : Z) base.z.push_back(Zm.get_d());
    for (auto& av : al) base.a_imag.push_back(av.get_d());
    base.p_imag = q.get_d();
    base.validate();
    std::vector<double> devs;
    for (long S : Svals) {
        ParameterSet ps = base;
        for (auto& zv : ps.z) zv *= static_cast<double>(S);
        double worst = 0.0;
        for (double T = base.z.front() - 1.0; T <= base.z.back() + 1.0; T += 0.17) {
            bool near = false;
            for (double Zm : base.z) near = near || std::abs(T - Zm) < 0.2;
            if (near) continue;
            cplx lhs = static_cast<double>(S) *
                       weight_w(j, cplx{static_cast<double>(S) * T, 0.0}, ps);
            cplx rhs = 1.0 / (T - base.z[static_cast<size_t>(j - 1)]);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        devs.push_back(worst);
    }
    return devs;
}

} // namespace qkz

#endif
