#ifndef QKZ_REDUCTION_HPP
#define QKZ_REDUCTION_HPP

#include <optional>
#include <vector>

#include "qkz/errors.hpp"
#include "qkz/master.hpp"
#include "qkz/params.hpp"
#include "qkz/rational.hpp"

namespace qkz {

// ---------------------------------------------------------------------------
// lattice classification of a pole location c against SingDual(z):
//   family A: c = z_l - a_l + (N+1) p, N >= 0
//   family B: c = z_l + a_l - N p,     N >= 0   (N = 0 is the fundamental layer)

struct LatticeTag {
    char family; // 'A' or 'B'
    int ell;     // 0-based
    int N;
};

inline std::optional<long> gq_integer(const GQ& v) {
    if (v.im != 0) return std::nullopt;
    if (v.re.get_den() != 1) return std::nullopt;
    if (!v.re.get_num().fits_slong_p()) return std::nullopt;
    return v.re.get_num().get_si();
}

inline std::optional<LatticeTag> classify_pole(const ExactParams& P, const GQ& c) {
    for (int l = 0; l < P.n; ++l) {
        GQ dA = (c - (P.z[static_cast<size_t>(l)] - P.a[static_cast<size_t>(l)])) / P.p;
        if (auto k = gq_integer(dA); k && *k >= 1 && *k <= lattice_max_depth + 1)
            return LatticeTag{'A', l, static_cast<int>(*k) - 1};
        GQ dB = (P.fund_pole(l) - c) / P.p;
        if (auto k = gq_integer(dB); k && *k >= 0 && *k <= lattice_max_depth)
            return LatticeTag{'B', l, static_cast<int>(*k)};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// the discrete differential D_p: g(t) -> g(t+p) b0(t,z) - g(t)

inline RationalFunction apply_Dp(const RationalFunction& g, const ExactParams& P) {
    if (g.max_pole_order() > 1)
        throw ClassViolationError("apply_Dp: F(z) admits simple poles only");
    RationalFunction gs = g.shifted_arg(P.p);

    // b0 = 1 + sum_m rho_m / (t - c_m) with c_m the fundamental poles
    RationalFunction out = gs;
    for (int m = 0; m < P.n; ++m) {
        GQ cm = P.fund_pole(m);
        GQ rho = resb0_exact(P, m);
        // polynomial part of gs times rho/(t-c_m)
        if (!gs.poly.empty()) {
            GPoly Ppoly(static_cast<size_t>(gs.poly_degree()) + 1);
            for (auto& [k, co] : gs.poly) Ppoly[static_cast<size_t>(k)] = co;
            GPoly q = gpoly_div_linear(Ppoly, cm);
            for (size_t k = 0; k < q.size(); ++k)
                out.add_poly(static_cast<long>(k), rho * q[k]);
            out.add_pole(cm, rho * gpoly_eval(Ppoly, cm));
        }
        // simple poles of gs times rho/(t-c_m)
        for (auto& pole : gs.poles) {
            const GQ& d = pole.loc;
            const GQ& r = pole.coeffs[0];
            if (d == cm)
                throw ClassViolationError("apply_Dp: shifted pole collides with b0 pole");
            GQ inv = GQ(1) / (cm - d);
            out.add_pole(cm, rho * r * inv);
            out.add_pole(d, -rho * r * inv);
        }
    }
    out = out - g;
    out.normalize();
    // image must stay inside F(z): every pole on SingDual
    for (auto& pole : out.poles)
        if (!classify_pole(P, pole.loc))
            throw ClassViolationError("apply_Dp image leaves F(z): pole off the dual lattice");
    return out;
}

// convenience generators of D_p images used by the elimination
inline RationalFunction dp_of_monomial(const ExactParams& P, long k) {
    RationalFunction g;
    g.add_poly(k, GQ(1));
    return apply_Dp(g, P);
}
inline RationalFunction dp_of_simple_pole(const ExactParams& P, const GQ& c) {
    RationalFunction g;
    g.add_pole(c, GQ(1));
    return apply_Dp(g, P);
}

// ---------------------------------------------------------------------------
// cohomology coordinates with reduction certificate

struct CohomologyClass {
    GVector coords;          // c_1 .. c_{n-1} in the w_j basis
    RationalFunction cert;   // g with f = sum_j c_j w_j + D_p(g)
};

inline void verify_certificate(const RationalFunction& f, const CohomologyClass& cls,
                               const ExactParams& P) {
    RationalFunction rhs = apply_Dp(cls.cert, P);
    for (int j = 1; j <= P.n - 1; ++j)
        rhs = rhs + weight_w_exact(P, j) * cls.coords[static_cast<size_t>(j - 1)];
    if (!(f == rhs)) throw ClassViolationError("reduction certificate identity failed");
}

inline CohomologyClass reduce(RationalFunction f, const ExactParams& P,
                              bool check_certificate = true) {
    check_genericity(P);
    const RationalFunction f_in = f;
    if (f.max_pole_order() > 1) throw ClassViolationError("reduce: input has a non-simple pole");
    for (auto& pole : f.poles)
        if (!classify_pole(P, pole.loc))
            throw ClassViolationError("reduce: pole off the dual lattice");

    RationalFunction g; // the certificate, accumulated so that f_in = f_cur + D_p(g) + ...
    // 1. eliminate the polynomial part from the top degree down
    while (!f.poly.empty()) {
        long d = f.poly_degree();
        RationalFunction img = dp_of_monomial(P, d + 1);
        auto it = img.poly.find(d);
        if (it == img.poly.end() || it->second.is_zero())
            throw GenericityError("resonance in polynomial elimination");
        GQ coef = f.poly[d] / it->second;
        f = f - img * coef;
        RationalFunction piece;
        piece.add_poly(d + 1, coef);
        g = g + piece;
        if (f.poly.count(d) && !f.poly[d].is_zero())
            throw GenericityError("polynomial elimination failed to cancel");
    }
    // 2. migrate poles along the p-direction into the fundamental layer
    //    (family B with N = 0); deterministic scan order via the sorted atlas
    for (bool progress = true; progress;) {
        progress = false;
        for (auto& pole : f.poles) {
            auto tag = classify_pole(P, pole.loc);
            GQ c = pole.loc;
            GQ res = pole.coeffs[0];
            if (tag->family == 'A') {
                // shift down: D_p(1/(t-c)) carries -1/(t-c)
                f = f + dp_of_simple_pole(P, c) * res;
                RationalFunction piece;
                piece.add_pole(c, -res);
                g = g + piece;
                progress = true;
                break;
            }
            if (tag->family == 'B' && tag->N >= 1) {
                // shift up: D_p(1/(t-c-p)) carries b0(t)/(t-c)
                GQ bv = b0_exact(c, P);
                if (bv.is_zero()) throw GenericityError("b0 vanishes at migration point");
                GQ s = -res / bv;
                f = f + dp_of_simple_pole(P, c + P.p) * s;
                RationalFunction piece;
                piece.add_pole(c + P.p, -s);
                g = g + piece;
                progress = true;
                break;
            }
        }
    }
    // 3. exact solve on the fundamental layer against {w_j} and b0 - 1 = D_p(1)
    int n = P.n;
    GMatrix A(static_cast<size_t>(n), GVector(static_cast<size_t>(n)));
    GVector rho(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) {
        GQ cm = P.fund_pole(m);
        rho[static_cast<size_t>(m)] = f.residue_at(cm);
        for (int j = 1; j <= n - 1; ++j)
            A[static_cast<size_t>(m)][static_cast<size_t>(j - 1)] =
                weight_w_exact(P, j).residue_at(cm);
        A[static_cast<size_t>(m)][static_cast<size_t>(n - 1)] = resb0_exact(P, m);
    }
    GVector sol = gq_solve(A, rho);
    CohomologyClass cls;
    cls.coords.assign(sol.begin(), sol.end() - 1);
    RationalFunction one;
    one.add_poly(0, sol.back());
    cls.cert = g + one;
    if (check_certificate) verify_certificate(f_in, cls, P);
    return cls;
}

// ---------------------------------------------------------------------------
// the connection matrices beta_l: column j holds the w-coordinates of
// b_l(.,z) w_j(..., z_l + p, ...)

struct ConnectionMatrix {
    GMatrix entries; // (n-1) x (n-1), entries[i][j]
    int ell = 0;     // 1-based shift direction
};

inline RationalFunction bl_times_shifted_w(const ExactParams& P, int ell, int j) {
    ExactParams Ps = P.shifted(ell - 1);
    std::vector<GQ> us, vs;
    for (int k = 0; k < j - 1; ++k)
        us.push_back(Ps.z[static_cast<size_t>(k)] - Ps.a[static_cast<size_t>(k)]);
    us.push_back(P.z[static_cast<size_t>(ell - 1)] + P.a[static_cast<size_t>(ell - 1)] + P.p);
    for (int k = 0; k < j; ++k) vs.push_back(Ps.fund_pole(k));
    vs.push_back(P.z[static_cast<size_t>(ell - 1)] - P.a[static_cast<size_t>(ell - 1)] + P.p);
    return from_linear_factors(GQ(1), us, vs);
}

inline ConnectionMatrix beta_matrix(const ExactParams& P, int ell) {
    if (ell < 1 || ell > P.n) throw ShapeError("beta_matrix: ell out of range");
    check_genericity(P);
    size_t m = static_cast<size_t>(P.n - 1);
    ConnectionMatrix B;
    B.ell = ell;
    B.entries.assign(m, GVector(m));
    for (int j = 1; j <= P.n - 1; ++j) {
        CohomologyClass cls = reduce(bl_times_shifted_w(P, ell, j), P);
        for (size_t i = 0; i < m; ++i) B.entries[i][static_cast<size_t>(j - 1)] = cls.coords[i];
    }
    return B;
}

// ---------------------------------------------------------------------------
// classical twisted-de-Rham reduction: quotient modulo images
//   g  ->  g' + g * sum_l alpha_l / (t - z_l)
// with basis {1/(t - z_l)}_{l=1..n-1}

// partial fractions of 1/((t-a)^k (t-b)), a != b
inline void add_pf_mixed(RationalFunction& out, const GQ& coeff, const GQ& a, int k, const GQ& b) {
    GQ d = b - a;
    if (d.is_zero()) {
        out.add_pole(a, coeff, k + 1);
        return;
    }
    GQ dpow = d; // d^{j+1} running
    for (int j = 0; j < k; ++j) {
        out.add_pole(a, -coeff / dpow, k - j);
        dpow *= d;
    }
    out.add_pole(b, coeff / (dpow / d));
}

// the twisted image of g (exact): g' + g * sum alpha_l/(t - z_l)
inline RationalFunction twisted_image(const RationalFunction& g, const std::vector<GQ>& zpts,
                                      const std::vector<GQ>& alpha) {
    RationalFunction out;
    // derivative
    for (auto& [k, c] : g.poly)
        if (k >= 1) out.add_poly(k - 1, c * GQ(k));
    for (auto& pole : g.poles)
        for (size_t o = 0; o < pole.coeffs.size(); ++o)
            out.add_pole(pole.loc, -GQ(static_cast<long>(o) + 1) * pole.coeffs[o],
                         static_cast<int>(o) + 2);
    // g * sum alpha_m/(t - z_m)
    for (size_t m = 0; m < zpts.size(); ++m) {
        const GQ& zm = zpts[m];
        const GQ& al = alpha[m];
        if (al.is_zero()) continue;
        if (!g.poly.empty()) {
            GPoly Ppoly(static_cast<size_t>(g.poly_degree()) + 1);
            for (auto& [k, co] : g.poly) Ppoly[static_cast<size_t>(k)] = co;
            GPoly q = gpoly_div_linear(Ppoly, zm);
            for (size_t k = 0; k < q.size(); ++k) out.add_poly(static_cast<long>(k), al * q[k]);
            out.add_pole(zm, al * gpoly_eval(Ppoly, zm));
        }
        for (auto& pole : g.poles)
            for (size_t o = 0; o < pole.coeffs.size(); ++o)
                add_pf_mixed(out, al * pole.coeffs[o], pole.loc, static_cast<int>(o) + 1, zm);
    }
    out.normalize();
    return out;
}

struct ClassicalClass {
    GVector coords;        // c_1 .. c_{n-1} over {1/(t-z_l)}
    RationalFunction cert; // g with f = sum c_l/(t-z_l) + twisted_image(g)
};

inline ClassicalClass classical_reduce(RationalFunction f, const std::vector<GQ>& zpts,
                                       const std::vector<GQ>& alpha,
                                       bool check_certificate = true) {
    size_t n = zpts.size();
    if (alpha.size() != n || n < 2) throw ShapeError("classical_reduce: parameter shapes");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (zpts[i] == zpts[j]) throw GenericityError("coincident punctures");
    const RationalFunction f_in = f;
    for (auto& pole : f.poles) {
        bool ok = false;
        for (auto& zm : zpts) ok = ok || pole.loc == zm;
        if (!ok) throw ClassViolationError("classical_reduce: pole away from the punctures");
    }
    GQ alpha_sum;
    for (auto& al : alpha) alpha_sum += al;

    RationalFunction g;
    auto subtract_image = [&](const RationalFunction& piece, const GQ& coef) {
        f = f - twisted_image(piece, zpts, alpha) * coef;
        g = g + piece * coef;
    };
    // polynomial part, top degree down: image of t^{k+1} has top coeff (k+1)+alpha_sum
    while (!f.poly.empty()) {
        long d = f.poly_degree();
        GQ lead = GQ(d + 1) + alpha_sum;
        if (lead.is_zero()) throw GenericityError("resonant alpha sum in polynomial elimination");
        RationalFunction piece;
        piece.add_poly(d + 1, GQ(1));
        GQ top = f.poly[d];
        RationalFunction img = twisted_image(piece, zpts, alpha);
        GQ coef = top / img.poly.at(d);
        f = f - img * coef;
        g = g + piece * coef;
    }
    // higher-order poles: image of 1/(t-z_l)^k has top coefficient (alpha_l - k)
    for (bool progress = true; progress;) {
        progress = false;
        for (auto& pole : f.poles) {
            int ord = static_cast<int>(pole.coeffs.size());
            if (ord <= 1) continue;
            size_t l = 0;
            while (zpts[l] != pole.loc) ++l;
            int k = ord - 1;
            GQ lead = alpha[l] - GQ(k);
            if (lead.is_zero()) throw GenericityError("resonant alpha in pole-order reduction");
            RationalFunction piece;
            piece.add_pole(pole.loc, GQ(1), k);
            GQ coef = pole.coeffs[static_cast<size_t>(ord - 1)] / lead;
            subtract_image(piece, coef);
            progress = true;
            break;
        }
    }
    // the relation image(1) = sum alpha_m/(t-z_m) removes the pole at z_n
    GQ gn = f.residue_at(zpts[n - 1]);
    if (!gn.is_zero()) {
        if (alpha[n - 1].is_zero()) throw GenericityError("alpha_n = 0: relation degenerates");
        RationalFunction piece;
        piece.add_poly(0, GQ(1));
        subtract_image(piece, gn / alpha[n - 1]);
    }
    ClassicalClass cls;
    for (size_t l = 0; l + 1 < n; ++l) cls.coords.push_back(f.residue_at(zpts[l]));
    cls.cert = g;
    if (check_certificate) {
        RationalFunction rhs = twisted_image(g, zpts, alpha);
        for (size_t l = 0; l + 1 < n; ++l) {
            RationalFunction base;
            base.add_pole(zpts[l], cls.coords[l]);
            rhs = rhs + base;
        }
        if (!(f_in == rhs)) throw ClassViolationError("classical certificate identity failed");
    }
    return cls;
}

// Gauss-Manin matrix A_i: column l holds the coordinates of
// d/dz_i [Phi/(t-z_l)] / Phi = -alpha_i/((t-z_i)(t-z_l)) + delta_{il}/(t-z_l)^2
inline GMatrix gauss_manin(const std::vector<GQ>& zpts, const std::vector<GQ>& alpha, int i1) {
    size_t n = zpts.size();
    if (i1 < 1 || static_cast<size_t>(i1) > n) throw ShapeError("gauss_manin index");
    size_t i = static_cast<size_t>(i1 - 1);
    GMatrix A(n - 1, GVector(n - 1));
    for (size_t l = 0; l + 1 < n; ++l) {
        RationalFunction f;
        add_pf_mixed(f, -alpha[i], zpts[i], 1, zpts[l]);
        if (i == l) f.add_pole(zpts[l], GQ(1), 2);
        f.normalize();
        ClassicalClass cls = classical_reduce(f, zpts, alpha);
        for (size_t k = 0; k + 1 < n; ++k) A[k][l] = cls.coords[k];
    }
    return A;
}

} // namespace qkz

#endif
