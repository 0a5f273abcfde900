#pragma once

#include <cstdint>
#include <vector>

#include "hibbo/matrix.hpp"

namespace hibbo {

// Reverse-mode differentiation tape over Matrix values.
//
// The op set is exactly what the VAE losses need: matmul, add (plain and
// row-broadcast), sub, hadamard, scalar scale/shift, elementwise
// tanh/exp/log/square/sqrt/clamp, full sum, per-row sums, and row slicing.
// Nodes are appended in topological order; backward() walks them once in
// reverse. Values are computed eagerly at construction.
class Tape {
public:
    using NodeId = std::int32_t;

    // Leaves. const nodes receive no gradient; param nodes do.
    NodeId constant(Matrix value);
    NodeId param(Matrix value);

    NodeId matmul(NodeId a, NodeId b);
    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId add_rowvec(NodeId a, NodeId row);  // row is 1 x cols, added to each row of a
    NodeId hadamard(NodeId a, NodeId b);
    NodeId scale(NodeId a, double k);
    NodeId shift(NodeId a, double k);  // elementwise + k
    NodeId tanh(NodeId a);
    NodeId exp(NodeId a);
    NodeId log(NodeId a);
    NodeId square(NodeId a);
    NodeId sqrt(NodeId a);
    NodeId clamp(NodeId a, double lo, double hi);
    NodeId sum(NodeId a);       // 1x1
    NodeId row_sums(NodeId a);  // N x d -> N x 1
    NodeId slice_rows(NodeId a, std::size_t r0, std::size_t r1);  // rows [r0, r1)

    const Matrix& value(NodeId id) const { return nodes_[id].value; }
    std::size_t size() const { return nodes_.size(); }

    // Gradients of a scalar output with respect to every node. Nodes that are
    // not ancestors of the output get an exact-zero gradient.
    class Gradients {
    public:
        const Matrix& at(NodeId id) const;
        bool touched(NodeId id) const;

    private:
        friend class Tape;
        std::vector<Matrix> grads_;
        std::vector<Matrix> zero_shapes_;
    };

    Gradients backward(NodeId output) const;

private:
    enum class Op : std::uint8_t {
        Const, Param, MatMul, Add, Sub, AddRowVec, Hadamard, Scale, Shift,
        Tanh, Exp, Log, Square, Sqrt, Clamp, Sum, RowSums, SliceRows,
    };

    struct Node {
        Op op;
        NodeId a = -1;
        NodeId b = -1;
        double c0 = 0.0;  // scale factor / shift / clamp lo
        double c1 = 0.0;  // clamp hi
        std::size_t r0 = 0, r1 = 0;  // slice bounds
        Matrix value;
    };

    NodeId push(Node n);
    void check_id(NodeId id) const;

    std::vector<Node> nodes_;
};

}  // namespace hibbo
