#ifndef QKZ_MASTER_HPP
#define QKZ_MASTER_HPP

#include <cmath>

#include "qkz/complex.hpp"
#include "qkz/errors.hpp"
#include "qkz/gamma.hpp"
#include "qkz/params.hpp"

namespace qkz {

// log of the p-deformed master function:
//   Phi_p(t,z) = prod_l Gamma((t-z_l+a_l)/p) Gamma(1-(t-z_l-a_l)/p) e^{-pi i (t-z_l)/p}
inline cplx log_phi_p(cplx t, const ParameterSet& params) {
    cplx p = params.p();
    cplx s{0.0, 0.0};
    for (int l = 0; l < params.n; ++l) {
        cplx d = t - params.z_full(l);
        s += log_gamma((d + params.a(l)) / p);
        s += log_gamma(1.0 - (d - params.a(l)) / p);
        s += -pi * iu * d / p;
    }
    return s;
}

// log-residue data of Phi_p(.,z) in t at the lattice point c = z_l - a_l + (N+1)p
// (the gamma-factor pole that crosses the real axis under z_l -> z_l + p).
// Residue of Gamma at -N is (-1)^N/N!; chain rule in t contributes a factor p.
inline ScaledComplex phi_p_residue(cplx c, const ParameterSet& params, int l, int N = 0) {
    cplx p = params.p();
    cplx logrest{0.0, 0.0};
    for (int k = 0; k < params.n; ++k) {
        cplx d = c - params.z_full(k);
        if (k != l) logrest += log_gamma((d + params.a(k)) / p);
        logrest += log_gamma(1.0 - (d - params.a(k)) / p);
        logrest += -pi * iu * d / p;
    }
    double logfact = 0.0;
    for (int j = 2; j <= N; ++j) logfact += std::log(static_cast<double>(j));
    ScaledComplex r = ScaledComplex::from_log(logrest - logfact);
    r.mant *= (N % 2 == 0 ? 1.0 : -1.0);
    ScaledComplex pf{p, 0.0};
    return (r * pf.normalize()).normalize();
}

// b0(t,z) = prod_l (t-z_l+a_l)/(t-z_l-a_l)
inline cplx b0(cplx t, const ParameterSet& params) {
    cplx r{1.0, 0.0};
    for (int l = 0; l < params.n; ++l) {
        cplx d = t - params.z_full(l);
        cplx den = d - params.a(l);
        if (std::abs(den) == 0.0) throw PoleError("b0 pole at t = " + format_complex(t));
        r *= (d + params.a(l)) / den;
    }
    return r;
}

// b_l(t,z) = (t-z_l-a_l-p)/(t-z_l+a_l-p), 1-based l
inline cplx b_ell(cplx t, const ParameterSet& params, int ell) {
    params.throw_if_bad_index(ell - 1);
    cplx d = t - params.z_full(ell - 1) - params.p();
    cplx den = d + params.a(ell - 1);
    if (std::abs(den) == 0.0) throw PoleError("b_ell pole at t = " + format_complex(t));
    return (d - params.a(ell - 1)) / den;
}

// w_j(z,t) = 1/(t-z_j-a_j) prod_{l<j} (t-z_l+a_l)/(t-z_l-a_l), j = 1..n-1
inline cplx weight_w(int j, cplx t, const ParameterSet& params) {
    if (j < 1 || j > params.n - 1) throw ShapeError("weight index j must be 1..n-1");
    cplx den = t - params.z_full(j - 1) - params.a(j - 1);
    if (std::abs(den) == 0.0) throw PoleError("w_j pole at t = " + format_complex(t));
    cplx r = 1.0 / den;
    for (int l = 0; l < j - 1; ++l) {
        cplx d = t - params.z_full(l);
        cplx dl = d - params.a(l);
        if (std::abs(dl) == 0.0) throw PoleError("w_j pole at t = " + format_complex(t));
        r *= (d + params.a(l)) / dl;
    }
    return r;
}

// the p-periodic weights G_m(t) = e^{2 pi i m t / p}
inline cplx periodic_G(int m, cplx t, const ParameterSet& params) {
    return std::exp(2.0 * pi * iu * static_cast<double>(m) * t / params.p());
}
inline cplx log_periodic_G(int m, cplx t, const ParameterSet& params) {
    return 2.0 * pi * iu * static_cast<double>(m) * t / params.p();
}

// classical exponents alpha_l = a_l / kappa
inline cplx alpha_of(const ParameterSet& params, int l) { return params.a(l) / params.kappa; }

// log of the classical master function Phi = prod |t-z_l|^{alpha_l} with branch
// phase e^{i pi alpha_l} for each z_l > t (lower factors approached from above)
inline cplx log_phi_classical(double t, const ParameterSet& params) {
    cplx s{0.0, 0.0};
    for (int l = 0; l < params.n; ++l) {
        double d = t - params.z[static_cast<size_t>(l)];
        if (d == 0.0) throw DomainError("log_phi_classical at a puncture z_l");
        cplx al = alpha_of(params, l);
        s += al * std::log(std::abs(d));
        if (d < 0.0) s += iu * pi * al;
    }
    return s;
}

// exponential decay rates of |G_m(t) Phi_p(t,z) r(t)| on the real axis for any
// rational r; derived from the Stirling asymptotics of the gamma factors:
// each Phi_p factor contributes e^{-2 pi t / Im p} as t -> +infinity and
// nothing as t -> -infinity, while |G_m| = e^{2 pi m t / Im p}.
inline std::pair<double, double> decay_exponents(const ParameterSet& params, int m) {
    double q = params.p_imag;
    double c_minus = 2.0 * pi * static_cast<double>(m) / q;
    double c_plus = 2.0 * pi * static_cast<double>(params.n - m) / q;
    return {c_minus, c_plus};
}

// exact counterparts of b0 / b_ell / w_j over Gaussian rationals (test mode)
inline GQ b0_exact(const GQ& t, const ExactParams& P) {
    GQ r(1);
    for (int l = 0; l < P.n; ++l) {
        GQ d = t - P.z[static_cast<size_t>(l)];
        GQ den = d - P.a[static_cast<size_t>(l)];
        if (den.is_zero()) throw PoleError("b0 pole (exact)");
        r *= (d + P.a[static_cast<size_t>(l)]) / den;
    }
    return r;
}

inline GQ b_ell_exact(const GQ& t, const ExactParams& P, int ell) {
    GQ d = t - P.z[static_cast<size_t>(ell - 1)] - P.p;
    GQ den = d + P.a[static_cast<size_t>(ell - 1)];
    if (den.is_zero()) throw PoleError("b_ell pole (exact)");
    return (d - P.a[static_cast<size_t>(ell - 1)]) / den;
}

// residue of b0 at the fundamental pole z_m + a_m
inline GQ resb0_exact(const ExactParams& P, int m) {
    GQ c = P.fund_pole(m);
    GQ r = GQ(2) * P.a[static_cast<size_t>(m)];
    for (int k = 0; k < P.n; ++k) {
        if (k == m) continue;
        GQ den = c - P.z[static_cast<size_t>(k)] - P.a[static_cast<size_t>(k)];
        if (den.is_zero()) throw GenericityError("fundamental-layer collision");
        r *= (c - P.z[static_cast<size_t>(k)] + P.a[static_cast<size_t>(k)]) / den;
    }
    return r;
}

// w_j as an exact rational function (simple poles at z_1+a_1 .. z_j+a_j)
inline RationalFunction weight_w_exact(const ExactParams& P, int j) {
    if (j < 1 || j > P.n - 1) throw ShapeError("weight index j must be 1..n-1");
    std::vector<GQ> us, vs;
    for (int l = 0; l < j - 1; ++l) us.push_back(P.z[static_cast<size_t>(l)] - P.a[static_cast<size_t>(l)]);
    for (int l = 0; l < j; ++l) vs.push_back(P.fund_pole(l));
    return from_linear_factors(GQ(1), us, vs);
}

} // namespace qkz

#endif
