#ifndef QKZ_QUADRATURE_HPP
#define QKZ_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "qkz/complex.hpp"
#include "qkz/errors.hpp"

namespace qkz {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-300;
    int max_panels = 20000;
    double eps_trunc = 1e-12; // decay-threshold truncation policy
    double r_max = 1e4;       // hard truncation radius
};

struct IntegralResult {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    int panels_used = 0;
    double truncation_radius = 0.0;
};

using Integrand = std::function<cplx(double)>;

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1] (QUADPACK dqk15 constants)
inline constexpr double gk_xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double gk_wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    cplx kronrod{0.0, 0.0};
    double err = 0.0;
    double mag = 0.0; // integral of |f| proxy
};

inline PanelResult gk15(const Integrand& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx resg = gk_wg[3] * fc;
    cplx resk = gk_wgk[7] * fc;
    double mag = gk_wgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        double x = h * gk_xgk[j];
        cplx f1 = f(c - x), f2 = f(c + x);
        resk += gk_wgk[j] * (f1 + f2);
        mag += gk_wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += gk_wg[j / 2] * (f1 + f2);
    }
    PanelResult r;
    r.kronrod = resk * h;
    r.mag = mag * std::abs(h);
    double diff = std::abs(resk - resg) * std::abs(h);
    // QUADPACK-style sharpened error model
    r.err = diff;
    if (diff > 0.0 && r.mag > 0.0) {
        double scaled = std::pow(200.0 * diff / r.mag, 1.5);
        if (scaled < 1.0) r.err = r.mag * scaled;
    }
    return r;
}

} // namespace detail

// adaptive Gauss-Kronrod over a finite interval; worst-panel-first refinement
inline IntegralResult integrate_adaptive(const Integrand& f, double a, double b,
                                         const QuadratureSpec& spec, int initial_splits = 8) {
    struct Seg {
        double a, b;
        detail::PanelResult r;
    };
    std::vector<Seg> segs;
    int panels = 0;
    double step = (b - a) / initial_splits;
    for (int k = 0; k < initial_splits; ++k) {
        double x0 = a + k * step, x1 = (k + 1 == initial_splits) ? b : a + (k + 1) * step;
        segs.push_back({x0, x1, detail::gk15(f, x0, x1)});
        ++panels;
    }
    auto totals = [&segs]() {
        cplx v{0.0, 0.0};
        double e = 0.0, m = 0.0;
        for (auto& s : segs) {
            v += s.r.kronrod;
            e += s.r.err;
            m += s.r.mag;
        }
        return std::tuple<cplx, double, double>(v, e, m);
    };
    for (;;) {
        auto [v, e, m] = totals();
        double target = std::max(spec.abs_tol, spec.rel_tol * std::max(std::abs(v), 1e-3 * m));
        if (e <= target) {
            IntegralResult out;
            out.value = v;
            out.error_estimate = e;
            out.panels_used = panels;
            return out;
        }
        if (panels >= spec.max_panels)
            throw NoConvergenceError("adaptive quadrature exhausted max_panels");
        size_t worst = 0;
        for (size_t k = 1; k < segs.size(); ++k)
            if (segs[k].r.err > segs[worst].r.err) worst = k;
        Seg s = segs[worst];
        double mid = 0.5 * (s.a + s.b);
        segs[worst] = {s.a, mid, detail::gk15(f, s.a, mid)};
        segs.push_back({mid, s.b, detail::gk15(f, mid, s.b)});
        ++panels;
    }
}

// real-line integral of an exponentially decaying integrand.  decay = (c-, c+):
// |f(t)| <= C e^{-c- |t|} as t -> -inf and C e^{-c+ t} as t -> +inf.
inline IntegralResult integrate_real_line(const Integrand& f, std::pair<double, double> decay,
                                          const QuadratureSpec& spec) {
    auto [cm, cp] = decay;
    if (!(std::min(cm, cp) > 0.0))
        throw DivergentIntegralError("non-positive decay rate: integral diverges");

    // scale of the integrand near the origin
    double scale = 0.0;
    for (double t = -8.0; t <= 8.0; t += 1.0) scale = std::max(scale, std::abs(f(t)));
    if (scale == 0.0) scale = 1.0;

    // truncation radii from the decay model, then verified by sampling
    auto pick_radius = [&](double c, double dir) {
        double R = std::max(10.0, std::log(1.0 / spec.eps_trunc) / c);
        while (R < spec.r_max && std::abs(f(dir * R)) > spec.eps_trunc * scale * c) R *= 1.25;
        return std::min(R, spec.r_max);
    };
    double Rm = pick_radius(cm, -1.0);
    double Rp = pick_radius(cp, +1.0);

    int splits = std::max(8, static_cast<int>((Rm + Rp) / 4.0));
    splits = std::min(splits, std::max(8, spec.max_panels / 4));
    IntegralResult core = integrate_adaptive(f, -Rm, Rp, spec, splits);

    // extend once and check the added contribution agrees with the tail model
    double Rm2 = std::min(1.5 * Rm, spec.r_max), Rp2 = std::min(1.5 * Rp, spec.r_max);
    cplx ext{0.0, 0.0};
    double ext_err = 0.0;
    int ext_panels = 0;
    if (Rm2 > Rm) {
        IntegralResult e1 = integrate_adaptive(f, -Rm2, -Rm, spec, 4);
        ext += e1.value;
        ext_err += e1.error_estimate;
        ext_panels += e1.panels_used;
    }
    if (Rp2 > Rp) {
        IntegralResult e2 = integrate_adaptive(f, Rp, Rp2, spec, 4);
        ext += e2.value;
        ext_err += e2.error_estimate;
        ext_panels += e2.panels_used;
    }
    double tail_model = std::abs(f(-Rm2)) / cm + std::abs(f(Rp2)) / cp;

    IntegralResult out;
    out.value = core.value + ext;
    out.error_estimate = core.error_estimate + ext_err + std::abs(ext) * spec.rel_tol + tail_model;
    out.panels_used = core.panels_used + ext_panels;
    out.truncation_radius = std::max(Rm2, Rp2);
    return out;
}

// endpoint-aware integrand: receives the node t together with the distances
// da = t - a and db = b - t carried at full relative accuracy, so algebraic
// endpoint factors can be evaluated without cancellation
using IntervalIntegrand = std::function<cplx(double t, double da, double db)>;

// finite-interval integral with algebraic endpoint singularities
// (t-a)^{alpha_left}, (b-t)^{alpha_right}; tanh-sinh substitution flattens both
inline IntegralResult integrate_interval(const IntervalIntegrand& f, double a, double b,
                                         std::pair<cplx, cplx> endpoint_exponents,
                                         const QuadratureSpec& spec) {
    if (!(endpoint_exponents.first.real() > -1.0) || !(endpoint_exponents.second.real() > -1.0))
        throw DomainError("non-integrable endpoint exponent (Re alpha <= -1)");
    if (!(b > a)) throw DomainError("integrate_interval needs a < b");

    double half = 0.5 * (b - a);
    auto term = [&](double u) -> cplx {
        double y = 0.5 * pi * std::sinh(u); // node x = tanh(y)
        double e2 = std::exp(-2.0 * std::abs(y));
        double near = 2.0 * e2 / (1.0 + e2);  // 1 - |x|, cancellation-free
        double far = 2.0 / (1.0 + e2);        // 1 + |x|
        double ch = std::cosh(y);
        double w = 0.5 * pi * std::cosh(u) / (ch * ch);
        if (near * half < 1e-290 || w < 1e-290) return {0.0, 0.0};
        double da = (y < 0.0) ? half * near : half * far;
        double db = (y < 0.0) ? half * far : half * near;
        double t = (y < 0.0) ? a + da : b - db;
        return f(t, da, db) * (w * half);
    };

    const double umax = 6.0;
    double h = 0.5;
    cplx prev{0.0, 0.0};
    cplx cur{0.0, 0.0};
    int evals = 0;
    double err = 1.0;
    for (int level = 0; level < 12; ++level) {
        if (level == 0) {
            cur = term(0.0);
            for (double u = h; u <= umax; u += h) cur += term(u) + term(-u);
            cur *= h;
            evals += static_cast<int>(2 * umax / h) + 1;
        } else {
            // halve the step: new nodes sit at odd multiples of the new h
            h /= 2;
            cplx add{0.0, 0.0};
            for (double u = h; u <= umax; u += 2 * h) add += term(u) + term(-u);
            evals += static_cast<int>(umax / h);
            cur = 0.5 * cur + h * add;
        }
        if (level > 0) {
            err = std::abs(cur - prev);
            double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(cur));
            if (err <= target && level >= 2) break;
        }
        prev = cur;
        if (evals > spec.max_panels * 15)
            throw NoConvergenceError("tanh-sinh quadrature exhausted budget");
    }
    IntegralResult out;
    out.value = cur;
    out.error_estimate = err;
    out.panels_used = evals / 15 + 1;
    out.truncation_radius = b - a;
    return out;
}

inline IntegralResult integrate_interval(const Integrand& f, double a, double b,
                                         std::pair<cplx, cplx> endpoint_exponents,
                                         const QuadratureSpec& spec) {
    return integrate_interval(
        IntervalIntegrand([&f](double t, double, double) { return f(t); }), a, b,
        endpoint_exponents, spec);
}

// Jackson integral p * sum_{|l| <= window} h(xi + l p) for compactly supported h
inline cplx jackson_sum(const std::function<cplx(cplx)>& h, cplx xi, cplx p, int window) {
    cplx s{0.0, 0.0};
    for (int l = -window; l <= window; ++l) s += h(xi + static_cast<double>(l) * p);
    return p * s;
}

} // namespace qkz

#endif
