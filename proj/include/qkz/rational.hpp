#ifndef QKZ_RATIONAL_HPP
#define QKZ_RATIONAL_HPP

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qkz/complex.hpp"
#include "qkz/errors.hpp"

namespace qkz {

// Gaussian rational: exact complex number with rational real and imaginary
// parts. mpq_class keeps each part in canonical reduced form.
struct GQ {
    mpq_class re{0};
    mpq_class im{0};

    GQ() = default;
    GQ(long v) : re(v) {}               // NOLINT(google-explicit-constructor)
    GQ(long num, long den) : re(num, den) { re.canonicalize(); }
    GQ(mpq_class r, mpq_class i = mpq_class(0)) : re(std::move(r)), im(std::move(i)) {}

    static GQ i_times(mpq_class v) { return GQ(mpq_class(0), std::move(v)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    friend GQ operator+(const GQ& x, const GQ& y) { return {x.re + y.re, x.im + y.im}; }
    friend GQ operator-(const GQ& x, const GQ& y) { return {x.re - y.re, x.im - y.im}; }
    friend GQ operator-(const GQ& x) { return {-x.re, -x.im}; }
    friend GQ operator*(const GQ& x, const GQ& y) {
        return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
    }
    friend GQ operator/(const GQ& x, const GQ& y) {
        mpq_class n = y.re * y.re + y.im * y.im;
        if (n == 0) throw DomainError("Gaussian-rational division by zero");
        return {(x.re * y.re + x.im * y.im) / n, (x.im * y.re - x.re * y.im) / n};
    }
    GQ& operator+=(const GQ& y) { return *this = *this + y; }
    GQ& operator-=(const GQ& y) { return *this = *this - y; }
    GQ& operator*=(const GQ& y) { return *this = *this * y; }
    GQ& operator/=(const GQ& y) { return *this = *this / y; }
    friend bool operator==(const GQ& x, const GQ& y) { return x.re == y.re && x.im == y.im; }
    friend bool operator!=(const GQ& x, const GQ& y) { return !(x == y); }
    // deterministic total order (for canonical pole sorting)
    friend bool operator<(const GQ& x, const GQ& y) {
        int c = cmp(x.re, y.re);
        if (c != 0) return c < 0;
        return cmp(x.im, y.im) < 0;
    }

    cplx to_cplx() const { return {re.get_d(), im.get_d()}; }

    // serialization: `num/den` or `num/den+num/den i` (den omitted when 1)
    std::string str() const {
        auto part = [](const mpq_class& q) { return q.get_str(); };
        if (im == 0) return part(re);
        std::string s = part(re);
        std::string t = part(im);
        if (!t.empty() && t[0] == '-')
            s += "-" + t.substr(1) + " i";
        else
            s += "+" + t + " i";
        return s;
    }

    static GQ parse(const std::string& s);
};

inline GQ GQ::parse(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (c != ' ') s.push_back(c);
    if (s.empty()) throw ConfigError("empty exact scalar");
    // split at the last top-level '+'/'-' preceding a trailing 'i'
    bool has_i = s.back() == 'i';
    try {
        if (!has_i) return GQ(mpq_class(s));
        std::string body = s.substr(0, s.size() - 1);
        for (size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') && body[k - 1] != '/' && body[k - 1] != '+' &&
                body[k - 1] != '-') {
                mpq_class re(body.substr(0, k));
                std::string imtxt = body.substr(k);
                if (imtxt == "+" || imtxt == "-") imtxt += "1";
                if (imtxt.front() == '+') imtxt.erase(0, 1); // mpq_class rejects leading '+'
                mpq_class im(imtxt);
                re.canonicalize();
                im.canonicalize();
                return GQ(re, im);
            }
        }
        std::string imtxt = body.empty() ? "1" : body;
        if (imtxt == "+" || imtxt == "-") imtxt += "1";
        mpq_class im(imtxt);
        im.canonicalize();
        return GQ(mpq_class(0), im);
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad exact scalar: " + raw);
    }
}

// ---------------------------------------------------------------------------
// dense polynomials over GQ (index = degree)

using GPoly = std::vector<GQ>;

inline void gpoly_trim(GPoly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}

inline GPoly gpoly_mul(const GPoly& f, const GPoly& g) {
    if (f.empty() || g.empty()) return {};
    GPoly h(f.size() + g.size() - 1);
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
    gpoly_trim(h);
    return h;
}

inline GQ gpoly_eval(const GPoly& f, const GQ& x) {
    GQ v;
    for (size_t k = f.size(); k-- > 0;) v = v * x + f[k];
    return v;
}

// quotient of f by (t - c); caller handles the remainder f(c)
inline GPoly gpoly_div_linear(const GPoly& f, const GQ& c) {
    if (f.size() < 2) return {};
    GPoly q(f.size() - 1);
    GQ carry = f.back();
    for (size_t k = f.size() - 1; k-- > 0;) {
        q[k] = carry;
        carry = f[k] + carry * c;
    }
    return q;
}

// ---------------------------------------------------------------------------
// rational function: polynomial part + pole atlas.  Laurent coefficients are
// stored by order: coeffs[k] multiplies (t - loc)^{-(k+1)}.

struct RationalFunction {
    struct Pole {
        GQ loc;
        std::vector<GQ> coeffs;
    };
    std::map<long, GQ> poly;
    std::vector<Pole> poles;

    bool is_zero() const { return poly.empty() && poles.empty(); }
    long poly_degree() const { return poly.empty() ? -1 : poly.rbegin()->first; }
    int max_pole_order() const {
        size_t m = 0;
        for (auto& P : poles) m = std::max(m, P.coeffs.size());
        return static_cast<int>(m);
    }

    void normalize() {
        for (auto it = poly.begin(); it != poly.end();)
            it = it->second.is_zero() ? poly.erase(it) : std::next(it);
        for (auto& P : poles)
            while (!P.coeffs.empty() && P.coeffs.back().is_zero()) P.coeffs.pop_back();
        std::erase_if(poles, [](const Pole& P) { return P.coeffs.empty(); });
        std::sort(poles.begin(), poles.end(),
                  [](const Pole& x, const Pole& y) { return x.loc < y.loc; });
    }

    void add_poly(long k, const GQ& c) {
        if (!c.is_zero()) poly[k] += c;
    }
    void add_pole(const GQ& loc, const GQ& coeff, int order = 1) {
        if (coeff.is_zero()) return;
        for (auto& P : poles)
            if (P.loc == loc) {
                if (static_cast<int>(P.coeffs.size()) < order) P.coeffs.resize(order);
                P.coeffs[order - 1] += coeff;
                return;
            }
        Pole P{loc, std::vector<GQ>(order)};
        P.coeffs[order - 1] = coeff;
        poles.push_back(std::move(P));
    }
    GQ residue_at(const GQ& loc) const {
        for (auto& P : poles)
            if (P.loc == loc) return P.coeffs.empty() ? GQ() : P.coeffs[0];
        return GQ();
    }

    friend RationalFunction operator+(RationalFunction f, const RationalFunction& g) {
        for (auto& [k, c] : g.poly) f.poly[k] += c;
        for (auto& P : g.poles)
            for (size_t k = 0; k < P.coeffs.size(); ++k)
                f.add_pole(P.loc, P.coeffs[k], static_cast<int>(k) + 1);
        f.normalize();
        return f;
    }
    friend RationalFunction operator-(RationalFunction f, const RationalFunction& g) {
        return f + (g * GQ(-1));
    }
    friend RationalFunction operator*(RationalFunction f, const GQ& s) {
        if (s.is_zero()) return {};
        for (auto& [k, c] : f.poly) c *= s;
        for (auto& P : f.poles)
            for (auto& c : P.coeffs) c *= s;
        return f;
    }
    friend bool operator==(const RationalFunction& f, const RationalFunction& g) {
        return (f - g).is_zero();
    }

    // shift of the argument: returns h(t) = f(t + s)
    RationalFunction shifted_arg(const GQ& s) const {
        RationalFunction h;
        for (auto& [k, c] : poly) {
            // (t+s)^k expanded via Pascal row
            GQ term = c;
            std::vector<GQ> row(static_cast<size_t>(k) + 1);
            row[0] = GQ(1);
            for (long j = 1; j <= k; ++j) {
                for (long m = j; m-- > 1;) row[m] = row[m] + row[m - 1];
                row[j] = GQ(1);
            }
            GQ sp(1);
            for (long j = k; j >= 0; --j) {
                h.add_poly(j, term * row[static_cast<size_t>(j)] * sp);
                sp *= s;
            }
        }
        for (auto& P : poles)
            for (size_t k = 0; k < P.coeffs.size(); ++k)
                h.add_pole(P.loc - s, P.coeffs[k], static_cast<int>(k) + 1);
        h.normalize();
        return h;
    }

    cplx eval(cplx t) const {
        cplx v{0.0, 0.0};
        for (auto& [k, c] : poly) {
            cplx tp{1.0, 0.0};
            for (long j = 0; j < k; ++j) tp *= t;
            v += c.to_cplx() * tp;
        }
        for (auto& P : poles) {
            cplx d = t - P.loc.to_cplx();
            cplx dp = d;
            for (auto& c : P.coeffs) {
                v += c.to_cplx() / dp;
                dp *= d;
            }
        }
        return v;
    }
};

// builds C * prod_u (t-u) / prod_v (t-v) with pairwise-distinct v (simple poles)
inline RationalFunction from_linear_factors(const GQ& C, std::vector<GQ> us, std::vector<GQ> vs) {
    // cancel matching numerator/denominator factors first
    for (size_t i = 0; i < us.size();) {
        bool hit = false;
        for (size_t j = 0; j < vs.size(); ++j)
            if (us[i] == vs[j]) {
                us.erase(us.begin() + static_cast<long>(i));
                vs.erase(vs.begin() + static_cast<long>(j));
                hit = true;
                break;
            }
        if (!hit) ++i;
    }
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j)
            if (vs[i] == vs[j]) throw GenericityError("repeated pole in linear-factor product");

    GPoly num{C};
    for (auto& u : us) num = gpoly_mul(num, GPoly{-u, GQ(1)});

    RationalFunction f;
    // peel denominator roots one at a time: num/((t-v0)...(t-vk)) =
    // residue partial fractions + polynomial part
    GPoly rem = num;
    // polynomial part: successive division of num by each linear factor
    GPoly q = num;
    for (auto& v : vs) q = gpoly_div_linear(q, v);
    for (size_t k = 0; k < q.size(); ++k) f.add_poly(static_cast<long>(k), q[k]);
    for (size_t j = 0; j < vs.size(); ++j) {
        GQ d(1);
        for (size_t k = 0; k < vs.size(); ++k)
            if (k != j) d *= vs[j] - vs[k];
        f.add_pole(vs[j], gpoly_eval(num, vs[j]) / d);
    }
    f.normalize();
    return f;
}

// ---------------------------------------------------------------------------
// exact dense linear algebra (small systems)

using GMatrix = std::vector<std::vector<GQ>>;
using GVector = std::vector<GQ>;

inline GVector gq_solve(GMatrix A, GVector b) {
    size_t n = A.size();
    if (n == 0 || A[0].size() != n || b.size() != n)
        throw ShapeError("gq_solve expects a square system");
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col].is_zero()) ++piv;
        if (piv == n) throw GenericityError("singular exact linear system");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col].is_zero()) continue;
            GQ m = A[r][col] / A[col][col];
            for (size_t c = col; c < n; ++c) A[r][c] -= m * A[col][c];
            b[r] -= m * b[col];
        }
    }
    GVector x(n);
    for (size_t k = 0; k < n; ++k) x[k] = b[k] / A[k][k];
    return x;
}

inline GMatrix gq_matmul(const GMatrix& A, const GMatrix& B) {
    if (A.empty() || B.empty() || A[0].size() != B.size()) throw ShapeError("gq_matmul shapes");
    GMatrix C(A.size(), GVector(B[0].size()));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t k = 0; k < B.size(); ++k)
            for (size_t j = 0; j < B[0].size(); ++j) C[i][j] += A[i][k] * B[k][j];
    return C;
}

} // namespace qkz

#endif
