#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "aptfs/matrix.hpp"

namespace aptfs::ad {

/// Handle to a node on a Tape.
struct Var {
    std::size_t id = 0;
};

/// Reverse-mode gradient tape over dense matrices. Nodes are appended during
/// the forward pass; backward() replays them in reverse. Single-threaded by
/// design: accumulation order is fixed, so results are bit-reproducible.
class Tape {
public:
    /// Leaf whose gradient is wanted.
    Var param(Matrix value);
    /// Leaf treated as a constant (no gradient accumulated).
    Var constant(Matrix value);

    Var add(Var a, Var b);
    /// Broadcast add of a 1 x m bias row to every row of a.
    Var add_row(Var a, Var bias);
    /// (a + offset) * scale, offset held fixed.
    Var affine(Var a, double scale, Matrix offset);
    Var matmul(Var a, Var b);
    /// a * b^T
    Var matmul_nt(Var a, Var b);
    Var tanh(Var a);
    Var softmax_rows(Var a);
    /// Mean squared error against a fixed target; 1x1 result.
    Var mse_loss(Var pred, Matrix target);
    /// Mean softmax cross-entropy (nats) against integer class codes; 1x1.
    Var ce_loss(Var logits, std::vector<int> labels);

    /// Seeds d(loss)=1 and accumulates gradients back to every param leaf.
    void backward(Var loss);

    const Matrix& value(Var v) const { return nodes_[v.id].value; }
    /// Valid after backward(); zero matrix for untouched leaves.
    const Matrix& grad(Var v) const { return nodes_[v.id].grad; }

private:
    struct Node {
        Matrix value;
        Matrix grad;
        std::function<void()> pull;  // adds this node's grad into its inputs'
        bool needs_grad = false;       // true iff some param leaf feeds this node
    };

    Var push(Matrix value, bool needs_grad);
    Matrix& grad_of(Var v) { return nodes_[v.id].grad; }
    bool needs_grad(Var v) const { return nodes_[v.id].needs_grad; }

    std::vector<Node> nodes_;
};

}  // namespace aptfs::ad
