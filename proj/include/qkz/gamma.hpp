#ifndef QKZ_GAMMA_HPP
#define QKZ_GAMMA_HPP

#include <cmath>

#include "qkz/complex.hpp"
#include "qkz/errors.hpp"

namespace qkz {

namespace detail {

// B_{2n}/(2n(2n-1)), n = 1..10 — coefficients of the Stirling tail in 1/w^{2n-1}
inline constexpr double stirling_coeff[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

inline constexpr double half_log_two_pi = 0.91893853320467274178032973640562;

// asymptotic series; caller guarantees |w| is large and Re w not deeply negative
inline cplx log_gamma_asymptotic(cplx w) {
    cplx res = (w - 0.5) * std::log(w) - w + half_log_two_pi;
    cplx w2 = w * w;
    cplx wp = w;
    for (double c : stirling_coeff) {
        res += c / wp;
        wp *= w2;
    }
    return res;
}

} // namespace detail

inline constexpr double stirling_threshold = 12.0;

inline bool near_gamma_pole(cplx w, double tol = 1e-12) {
    double k = std::round(w.real());
    return k <= 0.0 && std::abs(w.real() - k) < tol && std::abs(w.imag()) < tol;
}

// principal-branch log Gamma, continuous off the shifted negative real axis.
// Recurrence-lifts the argument into the Stirling region Re w >= 12.
inline cplx log_gamma(cplx w) {
    if (near_gamma_pole(w)) throw PoleError("log_gamma at pole " + format_complex(w));
    if (w.imag() < 0.0) return std::conj(log_gamma(std::conj(w)));
    cplx shift{0.0, 0.0};
    while (w.real() < stirling_threshold) {
        shift += std::log(w);
        w += 1.0;
    }
    return detail::log_gamma_asymptotic(w) - shift;
}

// raw Stirling form including the x^{-1/2} and (2 pi)^{1/2} factors; used only
// by decay estimation, never for final values
inline cplx log_gamma_stirling(cplx w) {
    if (std::abs(w) < stirling_threshold)
        throw DomainError("log_gamma_stirling below threshold |w| >= 12");
    return detail::log_gamma_asymptotic(w);
}

} // namespace qkz

#endif
