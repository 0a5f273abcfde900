#pragma once

#include "hibbo/matrix.hpp"

namespace hibbo {

// Cholesky factorization a = L L^T for a symmetric positive-definite matrix.
// Throws NotPositiveDefinite when a leading minor is <= 0.
Matrix cholesky(const Matrix& a);

// Cholesky with the standard jitter ladder: retries with jitter
// 1e-10 -> 1e-6 -> 1e-4 added to the diagonal before giving up.
// Returns the factor and stores the jitter actually used when requested.
Matrix cholesky_with_jitter(const Matrix& a, double* jitter_used = nullptr);

// Solves l y = b (or l^T y = b when transposed) for lower-triangular l.
// Throws SingularDiagonal when |l[i][i]| < 1e-14.
Vector triangular_solve(const Matrix& l, const Vector& b, bool transposed = false);

}  // namespace hibbo
