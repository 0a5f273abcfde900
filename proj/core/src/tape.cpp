#include "hibbo/tape.hpp"

#include <cmath>

#include "hibbo/errors.hpp"

namespace hibbo {

Tape::NodeId Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

void Tape::check_id(NodeId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
        throw DisconnectedNode("tape: node id out of range");
}

Tape::NodeId Tape::constant(Matrix value) {
    return push({Op::Const, -1, -1, 0, 0, 0, 0, std::move(value)});
}

Tape::NodeId Tape::param(Matrix value) {
    return push({Op::Param, -1, -1, 0, 0, 0, 0, std::move(value)});
}

Tape::NodeId Tape::matmul(NodeId a, NodeId b) {
    check_id(a); check_id(b);
    return push({Op::MatMul, a, b, 0, 0, 0, 0, hibbo::matmul(value(a), value(b))});
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
    check_id(a); check_id(b);
    return push({Op::Add, a, b, 0, 0, 0, 0, hibbo::add(value(a), value(b))});
}

Tape::NodeId Tape::sub(NodeId a, NodeId b) {
    check_id(a); check_id(b);
    return push({Op::Sub, a, b, 0, 0, 0, 0, hibbo::sub(value(a), value(b))});
}

Tape::NodeId Tape::add_rowvec(NodeId a, NodeId row) {
    check_id(a); check_id(row);
    const Matrix& m = value(a);
    const Matrix& r = value(row);
    if (r.rows() != 1 || r.cols() != m.cols())
        throw DimensionMismatch("add_rowvec: row must be 1 x cols(a)");
    Matrix out = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) += r(0, j);
    return push({Op::AddRowVec, a, row, 0, 0, 0, 0, std::move(out)});
}

Tape::NodeId Tape::hadamard(NodeId a, NodeId b) {
    check_id(a); check_id(b);
    return push({Op::Hadamard, a, b, 0, 0, 0, 0, hibbo::hadamard(value(a), value(b))});
}

Tape::NodeId Tape::scale(NodeId a, double k) {
    check_id(a);
    return push({Op::Scale, a, -1, k, 0, 0, 0, hibbo::scale(value(a), k)});
}

Tape::NodeId Tape::shift(NodeId a, double k) {
    check_id(a);
    Matrix out = value(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += k;
    return push({Op::Shift, a, -1, k, 0, 0, 0, std::move(out)});
}

namespace {
template <typename F>
Matrix map_elementwise(const Matrix& a, F f) {
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = f(out.data()[i]);
    return out;
}
}  // namespace

Tape::NodeId Tape::tanh(NodeId a) {
    check_id(a);
    return push({Op::Tanh, a, -1, 0, 0, 0, 0,
                 map_elementwise(value(a), [](double v) { return std::tanh(v); })});
}

Tape::NodeId Tape::exp(NodeId a) {
    check_id(a);
    return push({Op::Exp, a, -1, 0, 0, 0, 0,
                 map_elementwise(value(a), [](double v) { return std::exp(v); })});
}

Tape::NodeId Tape::log(NodeId a) {
    check_id(a);
    return push({Op::Log, a, -1, 0, 0, 0, 0,
                 map_elementwise(value(a), [](double v) { return std::log(v); })});
}

Tape::NodeId Tape::square(NodeId a) {
    check_id(a);
    return push({Op::Square, a, -1, 0, 0, 0, 0,
                 map_elementwise(value(a), [](double v) { return v * v; })});
}

Tape::NodeId Tape::sqrt(NodeId a) {
    check_id(a);
    return push({Op::Sqrt, a, -1, 0, 0, 0, 0,
                 map_elementwise(value(a), [](double v) { return std::sqrt(v); })});
}

Tape::NodeId Tape::clamp(NodeId a, double lo, double hi) {
    check_id(a);
    return push({Op::Clamp, a, -1, lo, hi, 0, 0,
                 map_elementwise(value(a), [lo, hi](double v) {
                     return v < lo ? lo : (v > hi ? hi : v);
                 })});
}

Tape::NodeId Tape::sum(NodeId a) {
    check_id(a);
    double s = 0.0;
    for (double v : value(a).values()) s += v;
    return push({Op::Sum, a, -1, 0, 0, 0, 0, Matrix(1, 1, {s})});
}

Tape::NodeId Tape::row_sums(NodeId a) {
    check_id(a);
    const Matrix& m = value(a);
    Matrix out(m.rows(), 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j);
        out(i, 0) = s;
    }
    return push({Op::RowSums, a, -1, 0, 0, 0, 0, std::move(out)});
}

Tape::NodeId Tape::slice_rows(NodeId a, std::size_t r0, std::size_t r1) {
    check_id(a);
    const Matrix& m = value(a);
    if (r0 >= r1 || r1 > m.rows()) throw DimensionMismatch("slice_rows: bad range");
    Matrix out(r1 - r0, m.cols());
    for (std::size_t i = r0; i < r1; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i - r0, j) = m(i, j);
    return push({Op::SliceRows, a, -1, 0, 0, r0, r1, std::move(out)});
}

const Matrix& Tape::Gradients::at(NodeId id) const {
    if (!grads_[id].empty()) return grads_[id];
    return zero_shapes_[id];
}

bool Tape::Gradients::touched(NodeId id) const { return !grads_[id].empty(); }

Tape::Gradients Tape::backward(NodeId output) const {
    check_id(output);
    const Matrix& out = value(output);
    if (out.rows() != 1 || out.cols() != 1)
        throw DimensionMismatch("backward: output node must be a 1x1 scalar");

    Gradients g;
    g.grads_.resize(nodes_.size());
    g.zero_shapes_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        g.zero_shapes_[i] = Matrix(nodes_[i].value.rows(), nodes_[i].value.cols());
    g.grads_[output] = Matrix(1, 1, {1.0});

    auto accum = [&](NodeId id, Matrix delta) {
        if (g.grads_[id].empty())
            g.grads_[id] = std::move(delta);
        else
            g.grads_[id] = hibbo::add(g.grads_[id], delta);
    };

    for (NodeId id = output; id >= 0; --id) {
        if (g.grads_[id].empty()) continue;
        const Node& n = nodes_[id];
        const Matrix& go = g.grads_[id];
        switch (n.op) {
            case Op::Const:
            case Op::Param:
                break;
            case Op::MatMul:
                accum(n.a, hibbo::matmul(go, value(n.b).transposed()));
                accum(n.b, hibbo::matmul(value(n.a).transposed(), go));
                break;
            case Op::Add:
                accum(n.a, go);
                accum(n.b, go);
                break;
            case Op::Sub:
                accum(n.a, go);
                accum(n.b, hibbo::scale(go, -1.0));
                break;
            case Op::AddRowVec: {
                accum(n.a, go);
                Matrix gr(1, go.cols());
                for (std::size_t i = 0; i < go.rows(); ++i)
                    for (std::size_t j = 0; j < go.cols(); ++j) gr(0, j) += go(i, j);
                accum(n.b, std::move(gr));
                break;
            }
            case Op::Hadamard:
                accum(n.a, hibbo::hadamard(go, value(n.b)));
                accum(n.b, hibbo::hadamard(go, value(n.a)));
                break;
            case Op::Scale:
                accum(n.a, hibbo::scale(go, n.c0));
                break;
            case Op::Shift:
                accum(n.a, go);
                break;
            case Op::Tanh: {
                Matrix d = go;
                const Matrix& y = n.value;
                for (std::size_t i = 0; i < d.size(); ++i)
                    d.data()[i] *= 1.0 - y.data()[i] * y.data()[i];
                accum(n.a, std::move(d));
                break;
            }
            case Op::Exp:
                accum(n.a, hibbo::hadamard(go, n.value));
                break;
            case Op::Log: {
                Matrix d = go;
                const Matrix& x = value(n.a);
                for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] /= x.data()[i];
                accum(n.a, std::move(d));
                break;
            }
            case Op::Square: {
                Matrix d = go;
                const Matrix& x = value(n.a);
                for (std::size_t i = 0; i < d.size(); ++i)
                    d.data()[i] *= 2.0 * x.data()[i];
                accum(n.a, std::move(d));
                break;
            }
            case Op::Sqrt: {
                // Subgradient 0 at exactly 0 so a perfectly matched pair of
                // sequences does not poison the whole gradient with infs.
                Matrix d = go;
                const Matrix& y = n.value;
                for (std::size_t i = 0; i < d.size(); ++i)
                    d.data()[i] = y.data()[i] > 0.0 ? d.data()[i] * 0.5 / y.data()[i] : 0.0;
                accum(n.a, std::move(d));
                break;
            }
            case Op::Clamp: {
                Matrix d = go;
                const Matrix& x = value(n.a);
                for (std::size_t i = 0; i < d.size(); ++i)
                    if (x.data()[i] < n.c0 || x.data()[i] > n.c1) d.data()[i] = 0.0;
                accum(n.a, std::move(d));
                break;
            }
            case Op::Sum: {
                const double s = go(0, 0);
                Matrix d(value(n.a).rows(), value(n.a).cols());
                for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] = s;
                accum(n.a, std::move(d));
                break;
            }
            case Op::RowSums: {
                const Matrix& x = value(n.a);
                Matrix d(x.rows(), x.cols());
                for (std::size_t i = 0; i < x.rows(); ++i)
                    for (std::size_t j = 0; j < x.cols(); ++j) d(i, j) = go(i, 0);
                accum(n.a, std::move(d));
                break;
            }
            case Op::SliceRows: {
                const Matrix& x = value(n.a);
                Matrix d(x.rows(), x.cols());
                for (std::size_t i = n.r0; i < n.r1; ++i)
                    for (std::size_t j = 0; j < x.cols(); ++j)
                        d(i, j) = go(i - n.r0, j);
                accum(n.a, std::move(d));
                break;
            }
        }
    }
    return g;
}

}  // namespace hibbo
