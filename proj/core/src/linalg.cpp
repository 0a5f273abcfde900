#include "hibbo/linalg.hpp"

#include <cmath>

#include "hibbo/errors.hpp"

namespace hibbo {

Matrix cholesky(const Matrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionMismatch("cholesky: matrix not square");
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) throw NotPositiveDefinite("cholesky: leading minor <= 0");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

Matrix cholesky_with_jitter(const Matrix& a, double* jitter_used) {
    static constexpr double ladder[] = {0.0, 1e-10, 1e-6, 1e-4};
    for (double jitter : ladder) {
        Matrix aj = a;
        for (std::size_t i = 0; i < a.rows(); ++i) aj(i, i) += jitter;
        try {
            Matrix l = cholesky(aj);
            if (jitter_used) *jitter_used = jitter;
            return l;
        } catch (const NotPositiveDefinite&) {
        }
    }
    throw NotPositiveDefinite("cholesky: not positive definite after jitter ladder");
}

Vector triangular_solve(const Matrix& l, const Vector& b, bool transposed) {
    const std::size_t n = l.rows();
    if (l.cols() != n) throw DimensionMismatch("triangular_solve: matrix not square");
    if (b.size() != n) throw DimensionMismatch("triangular_solve: rhs length mismatch");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(l(i, i)) < 1e-14)
            throw SingularDiagonal("triangular_solve: zero diagonal entry");

    Vector y(n, 0.0);
    if (!transposed) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[i];
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
            y[i] = s / l(i, i);
        }
    } else {
        for (std::size_t ii = n; ii-- > 0;) {
            double s = b[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * y[k];
            y[ii] = s / l(ii, ii);
        }
    }
    return y;
}

}  // namespace hibbo
