#ifndef QKZ_COMPLEX_HPP
#define QKZ_COMPLEX_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "qkz/errors.hpp"

namespace qkz {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline const cplx iu{0.0, 1.0};

inline cplx make_complex(double re, double im) {
    if (!std::isfinite(re) || !std::isfinite(im))
        throw DomainError("non-finite complex component");
    return {re, im};
}

// literal format: <re>(+|-)<im>i, e.g. "3+4i", "-0.5-2e-3i"; a bare real is accepted
inline cplx parse_complex(const std::string& s) {
    if (s.empty()) throw ConfigError("empty complex literal");
    const char* c = s.c_str();
    char* end = nullptr;
    double re = std::strtod(c, &end);
    if (end == c) throw ConfigError("bad complex literal: " + s);
    while (*end == ' ') ++end;
    if (*end == '\0') return make_complex(re, 0.0);
    if (*end == 'i' && end[1] == '\0') return make_complex(0.0, re);
    if (*end != '+' && *end != '-') throw ConfigError("bad complex literal: " + s);
    const char* c2 = end;
    double im = std::strtod(c2, &end);
    if (end == c2 || *end != 'i' || end[1] != '\0')
        throw ConfigError("bad complex literal: " + s);
    return make_complex(re, im);
}

inline std::string format_complex(cplx w) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", w.real(), w.imag());
    return buf;
}

// wrap into (-pi, pi]
inline double wrap_angle(double x) {
    x = std::fmod(x, 2 * pi);
    if (x > pi) x -= 2 * pi;
    if (x <= -pi) x += 2 * pi;
    return x;
}

// a complex value carried as mantissa * exp(log_scale); keeps determinant and
// gamma-product comparisons inside double range
struct ScaledComplex {
    cplx mant{0.0, 0.0};
    double log_scale = 0.0;

    static ScaledComplex from_log(cplx logval) {
        return {std::exp(cplx{0.0, logval.imag()}), logval.real()};
    }
    double log_abs() const { return std::log(std::abs(mant)) + log_scale; }
    double arg() const { return std::arg(mant); }
    cplx value() const { return mant * std::exp(log_scale); }

    ScaledComplex& normalize() {
        double m = std::abs(mant);
        if (m > 0 && std::isfinite(m)) {
            log_scale += std::log(m);
            mant /= m;
        }
        return *this;
    }
    friend ScaledComplex operator*(ScaledComplex a, const ScaledComplex& b) {
        a.mant *= b.mant;
        a.log_scale += b.log_scale;
        return a.normalize();
    }
    friend ScaledComplex operator/(ScaledComplex a, const ScaledComplex& b) {
        a.mant /= b.mant;
        a.log_scale -= b.log_scale;
        return a.normalize();
    }
};

} // namespace qkz

#endif
