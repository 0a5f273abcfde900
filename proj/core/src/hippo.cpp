#include "hibbo/hippo.hpp"

#include <cmath>

#include "hibbo/errors.hpp"

namespace hibbo::hippo {

HippoState HippoState::zero(std::size_t order, std::size_t channels) {
    HippoState s;
    s.c = Matrix(order, channels);
    s.step = 0;
    return s;
}

HippoOperator build_legs_operator(std::size_t order) {
    if (order == 0) throw InvalidOrder("build_legs_operator: order must be >= 1");
    HippoOperator op;
    op.order = order;
    op.A = Matrix(order, order);
    op.B = Vector(order, 0.0);
    for (std::size_t n = 0; n < order; ++n) {
        const double sn = std::sqrt(2.0 * n + 1.0);
        for (std::size_t k = 0; k < n; ++k)
            op.A(n, k) = -sn * std::sqrt(2.0 * k + 1.0);
        op.A(n, n) = -(static_cast<double>(n) + 1.0);
        op.B[n] = sn;
    }
    return op;
}

std::pair<Matrix, Vector> discretize_step(const HippoOperator& op, std::size_t t) {
    if (t == 0) throw InvalidOrder("discretize_step: t must be >= 1");
    const std::size_t n = op.order;
    const double half_dt = 0.5 / static_cast<double>(t);
    const double dt = 1.0 / static_cast<double>(t);

    // M = I - (dt/2) A, lower-triangular with positive diagonal.
    Matrix m(n, n);
    Matrix plus(n, n);  // I + (dt/2) A
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            m(i, j) = (i == j ? 1.0 : 0.0) - half_dt * op.A(i, j);
            plus(i, j) = (i == j ? 1.0 : 0.0) + half_dt * op.A(i, j);
        }
    }

    // Forward substitution, one column of the result at a time.
    Matrix a_bar(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = plus(i, col);
            for (std::size_t k = 0; k < i; ++k) s -= m(i, k) * a_bar(k, col);
            a_bar(i, col) = s / m(i, i);
        }
    }
    Vector b_bar(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = dt * op.B[i];
        for (std::size_t k = 0; k < i; ++k) s -= m(i, k) * b_bar[k];
        b_bar[i] = s / m(i, i);
    }
    return {std::move(a_bar), std::move(b_bar)};
}

HippoState hippo_step(const HippoOperator& op, const HippoState& state, const Vector& x) {
    if (x.empty()) throw ChannelMismatch("hippo_step: empty input vector");
    HippoState cur = state;
    if (cur.empty() && cur.c.empty())
        cur.c = Matrix(op.order, x.size());
    if (cur.c.rows() != op.order)
        throw ChannelMismatch("hippo_step: state order does not match operator");
    if (cur.c.cols() != x.size())
        throw ChannelMismatch("hippo_step: input channel count mismatch");

    auto [a_bar, b_bar] = discretize_step(op, cur.step + 1);
    HippoState next;
    next.c = add(matmul(a_bar, cur.c), matmul(Matrix::column(b_bar), Matrix::row(x)));
    next.step = cur.step + 1;
    return next;
}

EncodeResult encode_sequence(const HippoOperator& op, const Matrix& xs) {
    if (xs.rows() == 0) throw EmptySequence("encode_sequence: empty sequence");
    EncodeResult res;
    res.trajectory.reserve(xs.rows());
    HippoState state = HippoState::zero(op.order, xs.cols());
    for (std::size_t i = 0; i < xs.rows(); ++i) {
        state = hippo_step(op, state, xs.row_vector(i));
        res.trajectory.push_back(state);
    }
    res.final = res.trajectory.back();
    return res;
}

double shifted_legendre_normalized(std::size_t n, double s) {
    const double x = 2.0 * s - 1.0;
    double pk = 1.0, pk1 = 0.0;  // P_0, P_{-1}
    for (std::size_t k = 0; k < n; ++k) {
        const double next = ((2.0 * k + 1.0) * x * pk - k * pk1) / (k + 1.0);
        pk1 = pk;
        pk = next;
    }
    return std::sqrt(2.0 * n + 1.0) * pk;
}

Matrix reconstruct_signal(const HippoOperator& op, const HippoState& state,
                          const Vector& query_points) {
    if (state.empty()) throw EmptyState("reconstruct_signal: state has seen no input");
    if (state.c.rows() != op.order)
        throw ChannelMismatch("reconstruct_signal: state order does not match operator");
    const std::size_t channels = state.channels();
    Matrix out(query_points.size(), channels);
    for (std::size_t p = 0; p < query_points.size(); ++p) {
        const double s = query_points[p];
        for (std::size_t n = 0; n < op.order; ++n) {
            const double basis = shifted_legendre_normalized(n, s);
            for (std::size_t j = 0; j < channels; ++j)
                out(p, j) += state.c(n, j) * basis;
        }
    }
    return out;
}

double hippo_distance(const HippoState& a, const HippoState& b) {
    if (a.c.rows() != b.c.rows() || a.c.cols() != b.c.cols())
        throw ShapeMismatch("hippo_distance: state shapes differ");
    return frobenius_norm(sub(a.c, b.c));
}

KernelSpec KernelSpec::polynomial(std::size_t degree, double offset) {
    KernelSpec k;
    k.kind = Kind::Polynomial;
    k.degree = degree;
    k.offset = offset;
    return k;
}

KernelSpec KernelSpec::rbf(double lengthscale) {
    KernelSpec k;
    k.kind = Kind::Rbf;
    k.lengthscale = lengthscale;
    return k;
}

namespace {
double kernel_value(const Vector& a, const Vector& b, const KernelSpec& k) {
    switch (k.kind) {
        case KernelSpec::Kind::Linear:
            return dot(a, b);
        case KernelSpec::Kind::Polynomial:
            return std::pow(dot(a, b) + k.offset, static_cast<double>(k.degree));
        case KernelSpec::Kind::Rbf:
            return std::exp(-squared_distance(a, b) / (2.0 * k.lengthscale * k.lengthscale));
    }
    return 0.0;
}
}  // namespace

double average_pair_kernel(const Matrix& xs, const KernelSpec& kernel) {
    const std::size_t n = xs.rows();
    if (n == 0) throw EmptyInput("average_pair_kernel: empty input");
    double total = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const Vector xm = xs.row_vector(m);
        for (std::size_t j = 0; j < n; ++j)
            total += kernel_value(xm, xs.row_vector(j), kernel);
    }
    return total / (static_cast<double>(n) * static_cast<double>(n));
}

Proposition1Report proposition1_check(const Matrix& xs, const Matrix& ys,
                                      std::size_t order, std::size_t degree) {
    if (order <= degree)
        throw OrderTooLow("proposition1_check: order must exceed kernel degree");
    const HippoOperator op = build_legs_operator(order);
    const auto cx = encode_sequence(op, xs);
    const auto cy = encode_sequence(op, ys);
    const KernelSpec k = KernelSpec::polynomial(degree, 0.0);
    Proposition1Report rep;
    rep.hippo_distance = hippo_distance(cx.final, cy.final);
    rep.kernel_distance_gap =
        std::abs(average_pair_kernel(xs, k) - average_pair_kernel(ys, k));
    return rep;
}

}  // namespace hibbo::hippo
