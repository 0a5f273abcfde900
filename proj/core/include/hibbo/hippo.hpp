#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hibbo/matrix.hpp"

namespace hibbo::hippo {

// HiPPO-LegS transition operator: the (A, B) pair of the linear ODE
// dc/dt = A_t c + B_t x with the scaled-Legendre measure, where
//   A[n][k] = -sqrt(2n+1) sqrt(2k+1)   for n > k
//   A[n][n] = -(n+1)
//   B[n]    =  sqrt(2n+1)
// (0-indexed). A is lower-triangular; B entries are strictly positive.
struct HippoOperator {
    std::size_t order = 0;
    Matrix A;          // order x order, lower-triangular
    Vector B;          // order
    const char* family = "LegS";
};

// Running memory: coefficients c (order x channels) after `step` inputs.
// step == 0 means the zero state; the first input fixes the channel count.
struct HippoState {
    Matrix c;
    std::size_t step = 0;

    static HippoState zero(std::size_t order, std::size_t channels);
    bool empty() const { return step == 0; }
    std::size_t channels() const { return c.cols(); }
};

HippoOperator build_legs_operator(std::size_t order);

// Bilinear (Tustin) discretization at step t with the LegS time-varying
// scale dt = 1/t:
//   A_bar = (I - (dt/2) A)^{-1} (I + (dt/2) A)
//   B_bar = (I - (dt/2) A)^{-1} (dt B)
// The inverse is applied by forward substitution on the lower-triangular
// factor. t >= 1.
std::pair<Matrix, Vector> discretize_step(const HippoOperator& op, std::size_t t);

// One online update: c_{t+1} = A_bar_{t+1} c_t + B_bar_{t+1} x^T (per channel).
HippoState hippo_step(const HippoOperator& op, const HippoState& state, const Vector& x);

struct EncodeResult {
    HippoState final;
    std::vector<HippoState> trajectory;  // trajectory[i] = state after xs row i
};

// Folds hippo_step over the rows of xs (each row one input vector).
EncodeResult encode_sequence(const HippoOperator& op, const Matrix& xs);

// Normalized shifted Legendre basis value sqrt(2n+1) P_n(2s - 1), s in [0, 1].
double shifted_legendre_normalized(std::size_t n, double s);

// Evaluates x(s) ~= sum_n c[n][j] sqrt(2n+1) P_n(2s - 1) at the query points
// (normalized history positions s = tau/t in [0, 1]). Returns points x channels.
Matrix reconstruct_signal(const HippoOperator& op, const HippoState& state,
                          const Vector& query_points);

// Frobenius distance between two states of matching shape (Eq.-style
// consistency distance).
double hippo_distance(const HippoState& a, const HippoState& b);

struct KernelSpec {
    enum class Kind { Linear, Polynomial, Rbf } kind = Kind::Linear;
    std::size_t degree = 1;     // Polynomial
    double offset = 0.0;        // Polynomial
    double lengthscale = 1.0;   // Rbf

    static KernelSpec linear() { return {}; }
    static KernelSpec polynomial(std::size_t degree, double offset = 0.0);
    static KernelSpec rbf(double lengthscale);
};

// Average pair kernel value D = (1/N^2) sum_m sum_n k(x_m, x_n) over the rows
// of xs. For the linear kernel this equals the squared norm of the row mean.
double average_pair_kernel(const Matrix& xs, const KernelSpec& kernel);

struct Proposition1Report {
    double hippo_distance = 0.0;
    double kernel_distance_gap = 0.0;  // |D_x - D_y|
};

// Computes both sides of the Proposition-1 association for two equally long
// scalar-channel sequences: the HiPPO state distance at the given order and
// the average-pair-kernel gap under a degree-p polynomial kernel.
// Requires order >= p + 1.
Proposition1Report proposition1_check(const Matrix& xs, const Matrix& ys,
                                      std::size_t order, std::size_t degree);

}  // namespace hibbo::hippo
