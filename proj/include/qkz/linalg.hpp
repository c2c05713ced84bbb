#ifndef QKZ_LINALG_HPP
#define QKZ_LINALG_HPP

#include <cmath>
#include <vector>

#include "qkz/complex.hpp"
#include "qkz/errors.hpp"

namespace qkz {

using CMatrix = std::vector<std::vector<cplx>>;
using CVector = std::vector<cplx>;

inline CMatrix cmat_identity(size_t n) {
    CMatrix I(n, CVector(n));
    for (size_t k = 0; k < n; ++k) I[k][k] = 1.0;
    return I;
}

inline CMatrix cmat_mul(const CMatrix& A, const CMatrix& B) {
    if (A.empty() || B.empty() || A[0].size() != B.size()) throw ShapeError("cmat_mul shapes");
    CMatrix C(A.size(), CVector(B[0].size()));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t k = 0; k < B.size(); ++k) {
            cplx aik = A[i][k];
            if (aik == cplx{0.0, 0.0}) continue;
            for (size_t j = 0; j < B[0].size(); ++j) C[i][j] += aik * B[k][j];
        }
    return C;
}

inline CMatrix cmat_sub(CMatrix A, const CMatrix& B) {
    if (A.size() != B.size() || (!A.empty() && A[0].size() != B[0].size()))
        throw ShapeError("cmat_sub shapes");
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[i].size(); ++j) A[i][j] -= B[i][j];
    return A;
}

inline CMatrix cmat_scale(CMatrix A, cplx s) {
    for (auto& row : A)
        for (auto& v : row) v *= s;
    return A;
}

inline double frobenius(const CMatrix& A) {
    double s = 0.0;
    for (auto& row : A)
        for (auto& v : row) s += std::norm(v);
    return std::sqrt(s);
}

// determinant accumulated as a product of LU pivots in scaled form, so values
// spanning hundreds of orders of magnitude stay representable
inline ScaledComplex cmat_det_scaled(CMatrix A) {
    size_t n = A.size();
    ScaledComplex det{cplx{1.0, 0.0}, 0.0};
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) == 0.0) return {cplx{0.0, 0.0}, 0.0};
        if (piv != col) {
            std::swap(A[piv], A[col]);
            det.mant = -det.mant;
        }
        det = det * ScaledComplex{A[col][col], 0.0};
        for (size_t r = col + 1; r < n; ++r) {
            cplx m = A[r][col] / A[col][col];
            for (size_t c = col; c < n; ++c) A[r][c] -= m * A[col][c];
        }
    }
    return det;
}

inline CMatrix cmat_inverse(CMatrix A) {
    size_t n = A.size();
    CMatrix I = cmat_identity(n);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) == 0.0) throw GenericityError("singular matrix inverse");
        std::swap(A[piv], A[col]);
        std::swap(I[piv], I[col]);
        cplx d = A[col][col];
        for (size_t c = 0; c < n; ++c) {
            A[col][c] /= d;
            I[col][c] /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            cplx m = A[r][col];
            if (m == cplx{0.0, 0.0}) continue;
            for (size_t c = 0; c < n; ++c) {
                A[r][c] -= m * A[col][c];
                I[r][c] -= m * I[col][c];
            }
        }
    }
    return I;
}

inline double cond_estimate(const CMatrix& A) {
    return frobenius(A) * frobenius(cmat_inverse(A));
}

// Kronecker-structure helper: apply a d_i*d_j square matrix R to tensor legs
// (i, j) of a product space with leg dimensions dims (legs 0-based, i != j)
inline CMatrix apply_on_legs(const CMatrix& R, const std::vector<size_t>& dims, size_t leg_i,
                             size_t leg_j) {
    size_t total = 1;
    for (size_t d : dims) total *= d;
    size_t di = dims[leg_i], dj = dims[leg_j];
    if (R.size() != di * dj || R[0].size() != di * dj) throw ShapeError("apply_on_legs: R size");
    CMatrix M(total, CVector(total));
    std::vector<size_t> idx(dims.size());
    for (size_t colState = 0; colState < total; ++colState) {
        size_t rem = colState;
        for (size_t k = dims.size(); k-- > 0;) {
            idx[k] = rem % dims[k];
            rem /= dims[k];
        }
        size_t src = idx[leg_i] * dj + idx[leg_j];
        for (size_t ri = 0; ri < di; ++ri)
            for (size_t rj = 0; rj < dj; ++rj) {
                cplx v = R[ri * dj + rj][src];
                if (v == cplx{0.0, 0.0}) continue;
                std::vector<size_t> out = idx;
                out[leg_i] = ri;
                out[leg_j] = rj;
                size_t rowState = 0;
                for (size_t k = 0; k < dims.size(); ++k) rowState = rowState * dims[k] + out[k];
                M[rowState][colState] += v;
            }
    }
    return M;
}

// entrywise least squares for  y_k = sum_c x_{kc} beta_c  (real design matrix)
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& X,
                                         const std::vector<double>& y) {
    size_t rows = X.size(), cols = X.empty() ? 0 : X[0].size();
    if (rows < cols) throw FitError("least_squares: underdetermined");
    std::vector<std::vector<double>> N(cols, std::vector<double>(cols));
    std::vector<double> b(cols);
    for (size_t r = 0; r < rows; ++r)
        for (size_t i = 0; i < cols; ++i) {
            b[i] += X[r][i] * y[r];
            for (size_t j = 0; j < cols; ++j) N[i][j] += X[r][i] * X[r][j];
        }
    // Gaussian elimination on the normal equations
    for (size_t col = 0; col < cols; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < cols; ++r)
            if (std::abs(N[r][col]) > std::abs(N[piv][col])) piv = r;
        if (std::abs(N[piv][col]) < 1e-300) throw FitError("least_squares: singular design");
        std::swap(N[piv], N[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = 0; r < cols; ++r) {
            if (r == col) continue;
            double m = N[r][col] / N[col][col];
            for (size_t c = col; c < cols; ++c) N[r][c] -= m * N[col][c];
            b[r] -= m * b[col];
        }
    }
    std::vector<double> out(cols);
    for (size_t k = 0; k < cols; ++k) out[k] = b[k] / N[k][k];
    return out;
}

// slope of log|y| against log x (empirical convergence order)
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw FitError("loglog_slope needs >= 2 points");
    std::vector<std::vector<double>> X;
    std::vector<double> Y;
    for (size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(std::abs(y[k]) > 0.0)) throw FitError("loglog_slope domain");
        X.push_back({1.0, std::log(x[k])});
        Y.push_back(std::log(std::abs(y[k])));
    }
    return least_squares(X, Y)[1];
}

} // namespace qkz

#endif
