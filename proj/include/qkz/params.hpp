#ifndef QKZ_PARAMS_HPP
#define QKZ_PARAMS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "qkz/complex.hpp"
#include "qkz/errors.hpp"
#include "qkz/rational.hpp"

namespace qkz {

// lattice collision tolerance, relative to |p|
inline constexpr double collision_rel_tol = 1e-9;
inline constexpr int lattice_max_depth = 32;

// the tuple (n, z, a, p, kappa); z real increasing, a and p purely imaginary
// with positive imaginary part (the reality domain needed for real-line
// contour convergence)
struct ParameterSet {
    int n = 0;
    std::vector<double> z;      // real positions, strictly increasing
    std::vector<double> a_imag; // Im a_l > 0
    double p_imag = 1.0;        // Im p > 0
    cplx kappa{2.0, 0.0};

    cplx a(int l) const { return {0.0, a_imag[static_cast<size_t>(l)]}; }
    cplx p() const { return {0.0, p_imag}; }
    cplx zc(int l) const { return {z[static_cast<size_t>(l)], 0.0}; }

    ParameterSet shifted(int l) const {
        ParameterSet q = *this;
        throw_if_bad_index(l);
        // z_l + p leaves the real axis; keep the complex shift explicitly
        q.z_shift_steps.resize(static_cast<size_t>(n), 0);
        q.z_shift_steps[static_cast<size_t>(l)] += 1;
        return q;
    }
    // integer multiples of p added to each z_l (difference-equation shifts)
    std::vector<int> z_shift_steps;
    cplx z_full(int l) const {
        cplx v = zc(l);
        if (!z_shift_steps.empty()) v += static_cast<double>(z_shift_steps[static_cast<size_t>(l)]) * p();
        return v;
    }

    void throw_if_bad_index(int l) const {
        if (l < 0 || l >= n) throw ShapeError("point index out of range");
    }

    void validate() const {
        if (n < 2) throw ConfigError("need n >= 2");
        if (static_cast<int>(z.size()) != n || static_cast<int>(a_imag.size()) != n)
            throw ConfigError("z/a length mismatch with n");
        for (int l = 0; l + 1 < n; ++l)
            if (!(z[static_cast<size_t>(l)] < z[static_cast<size_t>(l) + 1]))
                throw ConfigError("z must be strictly increasing");
        for (double ai : a_imag)
            if (!(ai > 0.0)) throw ConfigError("need Im a_l > 0");
        if (!(p_imag > 0.0)) throw ConfigError("need Im p > 0");
    }
};

// exact-arithmetic view: z, a, p as Gaussian rationals ("test mode with real a"
// is the same struct with real entries)
struct ExactParams {
    int n = 0;
    std::vector<GQ> z;
    std::vector<GQ> a;
    GQ p;

    static ExactParams make(std::vector<GQ> z, std::vector<GQ> a, GQ p) {
        ExactParams P;
        P.n = static_cast<int>(z.size());
        if (a.size() != z.size()) throw ConfigError("z/a length mismatch");
        P.z = std::move(z);
        P.a = std::move(a);
        P.p = std::move(p);
        return P;
    }
    // the reality-domain instance: real rational z, a = i*al, p = i*q
    static ExactParams make_imag(std::vector<mpq_class> zr, std::vector<mpq_class> al,
                                 mpq_class q) {
        std::vector<GQ> z, a;
        for (auto& v : zr) z.emplace_back(v);
        for (auto& v : al) a.push_back(GQ::i_times(v));
        return make(std::move(z), std::move(a), GQ::i_times(std::move(q)));
    }

    GQ fund_pole(int m) const { return z[static_cast<size_t>(m)] + a[static_cast<size_t>(m)]; }

    ExactParams shifted(int l) const {
        ExactParams P = *this;
        P.z[static_cast<size_t>(l)] += p;
        return P;
    }

    ParameterSet to_floating(cplx kappa = {2.0, 0.0}) const {
        ParameterSet P;
        P.n = n;
        P.kappa = kappa;
        for (auto& v : z) {
            if (v.im != 0) throw DomainError("to_floating needs real z");
            P.z.push_back(v.re.get_d());
        }
        for (auto& v : a) {
            if (v.re != 0) throw DomainError("to_floating needs imaginary a");
            P.a_imag.push_back(v.im.get_d());
        }
        if (p.re != 0) throw DomainError("to_floating needs imaginary p");
        P.p_imag = p.im.get_d();
        P.validate();
        return P;
    }
};

// ---------------------------------------------------------------------------
// singular lattices.
//   Sing:     t = z_l - a_l - N p   and  t = z_l + a_l + (N+1) p,  N >= 0
//   SingDual: t = z_l - a_l + (N+1) p  and  t = z_l + a_l - N p,   N >= 0

enum class LatticeKind { Sing, SingDual };

struct LatticePoint {
    cplx t;
    int ell = 0;  // 1-based generator index
    int sign = 0; // -1 for the z_l - a_l family, +1 for z_l + a_l
    int N = 0;
};

struct SingularLattice {
    LatticeKind kind = LatticeKind::Sing;
    std::vector<LatticePoint> points;

    static SingularLattice build(const ParameterSet& params, LatticeKind kind, int depth) {
        if (depth < 0 || depth > lattice_max_depth)
            throw ConfigError("lattice depth out of supported range");
        SingularLattice L;
        L.kind = kind;
        cplx p = params.p();
        for (int l = 0; l < params.n; ++l) {
            cplx zm = params.z_full(l) - params.a(l);
            cplx zp = params.z_full(l) + params.a(l);
            for (int N = 0; N <= depth; ++N) {
                if (kind == LatticeKind::Sing) {
                    L.points.push_back({zm - static_cast<double>(N) * p, l + 1, -1, N});
                    L.points.push_back({zp + static_cast<double>(N + 1) * p, l + 1, +1, N});
                } else {
                    L.points.push_back({zm + static_cast<double>(N + 1) * p, l + 1, -1, N});
                    L.points.push_back({zp - static_cast<double>(N) * p, l + 1, +1, N});
                }
            }
        }
        return L;
    }

    // reproduce the generator point from its tag (round-trip invariant)
    static cplx from_tag(const ParameterSet& params, LatticeKind kind, int ell, int sign, int N) {
        cplx base = params.z_full(ell - 1) + static_cast<double>(sign) * params.a(ell - 1);
        cplx p = params.p();
        if (kind == LatticeKind::Sing)
            return sign < 0 ? base - static_cast<double>(N) * p : base + static_cast<double>(N + 1) * p;
        return sign < 0 ? base + static_cast<double>(N + 1) * p : base - static_cast<double>(N) * p;
    }
};

// genericity scan: no two SingDual points within collision tolerance
inline void check_genericity(const ParameterSet& params, int depth = 12) {
    auto L = SingularLattice::build(params, LatticeKind::SingDual, depth);
    double tol = collision_rel_tol * std::abs(params.p());
    for (size_t i = 0; i < L.points.size(); ++i)
        for (size_t j = i + 1; j < L.points.size(); ++j)
            if (std::abs(L.points[i].t - L.points[j].t) < tol)
                throw GenericityError("singular-lattice collision near t = " +
                                      format_complex(L.points[i].t));
}

// exact genericity: SingDual collisions decided exactly over Gaussian rationals
inline void check_genericity(const ExactParams& P, int depth = 12) {
    std::vector<GQ> pts;
    for (int l = 0; l < P.n; ++l) {
        for (int N = 0; N <= depth; ++N) {
            pts.push_back(P.z[static_cast<size_t>(l)] - P.a[static_cast<size_t>(l)] + GQ(N + 1) * P.p);
            pts.push_back(P.z[static_cast<size_t>(l)] + P.a[static_cast<size_t>(l)] - GQ(N) * P.p);
        }
        if (P.a[static_cast<size_t>(l)].is_zero())
            throw GenericityError("a_l = 0 degenerates the lattice (b0 = 1)");
    }
    std::sort(pts.begin(), pts.end());
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i] == pts[i + 1]) throw GenericityError("exact singular-lattice collision");
}

} // namespace qkz

#endif
