#include "aptfs/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "aptfs/error.hpp"

namespace aptfs::ad {

namespace {

void ensure_grad(Matrix& g, std::size_t rows, std::size_t cols) {
    if (g.rows != rows || g.cols != cols) g = Matrix(rows, cols);
}

void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw DataError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows) + "x" +
                        std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" +
                        std::to_string(b.cols) + ")");
}

}  // namespace

Var Tape::push(Matrix value, bool needs_grad) {
    nodes_.push_back({std::move(value), Matrix{}, nullptr, needs_grad});
    return {nodes_.size() - 1};
}

Var Tape::param(Matrix value) { return push(std::move(value), true); }
Var Tape::constant(Matrix value) { return push(std::move(value), false); }

Var Tape::add(Var a, Var b) {
    check_same_shape(value(a), value(b), "add");
    Matrix out = value(a);
    const Matrix& vb = value(b);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += vb.data[i];
    const Var o = push(std::move(out), needs_grad(a) || needs_grad(b));
    nodes_[o.id].pull = [this, a, b, o] {
        const Matrix& g = grad_of(o);
        if (needs_grad(a)) {
            Matrix& ga = grad_of(a);
            ensure_grad(ga, g.rows, g.cols);
            for (std::size_t i = 0; i < g.data.size(); ++i) ga.data[i] += g.data[i];
        }
        if (needs_grad(b)) {
            Matrix& gb = grad_of(b);
            ensure_grad(gb, g.rows, g.cols);
            for (std::size_t i = 0; i < g.data.size(); ++i) gb.data[i] += g.data[i];
        }
    };
    return o;
}

Var Tape::add_row(Var a, Var bias) {
    const Matrix& va = value(a);
    const Matrix& vb = value(bias);
    if (vb.rows != 1 || vb.cols != va.cols)
        throw DataError("add_row: bias must be 1x" + std::to_string(va.cols));
    Matrix out = va;
    for (std::size_t i = 0; i < out.rows; ++i) {
        for (std::size_t j = 0; j < out.cols; ++j) out(i, j) += vb(0, j);
    }
    const Var o = push(std::move(out), needs_grad(a) || needs_grad(bias));
    nodes_[o.id].pull = [this, a, bias, o] {
        const Matrix& g = grad_of(o);
        if (needs_grad(a)) {
            Matrix& ga = grad_of(a);
            ensure_grad(ga, g.rows, g.cols);
            for (std::size_t i = 0; i < g.data.size(); ++i) ga.data[i] += g.data[i];
        }
        if (needs_grad(bias)) {
            Matrix& gb = grad_of(bias);
            ensure_grad(gb, 1, g.cols);
            for (std::size_t i = 0; i < g.rows; ++i) {
                for (std::size_t j = 0; j < g.cols; ++j) gb(0, j) += g(i, j);
            }
        }
    };
    return o;
}

Var Tape::affine(Var a, double scale, Matrix offset) {
    check_same_shape(value(a), offset, "affine");
    Matrix out = value(a);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = (out.data[i] + offset.data[i]) * scale;
    const Var o = push(std::move(out), needs_grad(a));
    nodes_[o.id].pull = [this, a, scale, o] {
        if (!needs_grad(a)) return;
        const Matrix& g = grad_of(o);
        Matrix& ga = grad_of(a);
        ensure_grad(ga, g.rows, g.cols);
        for (std::size_t i = 0; i < g.data.size(); ++i) ga.data[i] += g.data[i] * scale;
    };
    return o;
}

Var Tape::matmul(Var a, Var b) {
    Matrix out;
    aptfs::matmul(value(a), value(b), out);
    const Var o = push(std::move(out), needs_grad(a) || needs_grad(b));
    nodes_[o.id].pull = [this, a, b, o] {
        const Matrix& g = grad_of(o);
        if (needs_grad(a)) {
            Matrix da;
            aptfs::matmul_nt(g, value(b), da);  // dA = G B'
            Matrix& ga = grad_of(a);
            ensure_grad(ga, da.rows, da.cols);
            for (std::size_t i = 0; i < da.data.size(); ++i) ga.data[i] += da.data[i];
        }
        if (needs_grad(b)) {
            Matrix db;
            aptfs::matmul_tn(value(a), g, db);  // dB = A' G
            Matrix& gb = grad_of(b);
            ensure_grad(gb, db.rows, db.cols);
            for (std::size_t i = 0; i < db.data.size(); ++i) gb.data[i] += db.data[i];
        }
    };
    return o;
}

Var Tape::matmul_nt(Var a, Var b) {
    Matrix out;
    aptfs::matmul_nt(value(a), value(b), out);
    const Var o = push(std::move(out), needs_grad(a) || needs_grad(b));
    nodes_[o.id].pull = [this, a, b, o] {
        const Matrix& g = grad_of(o);
        if (needs_grad(a)) {
            Matrix da;
            aptfs::matmul(g, value(b), da);  // dA = G B
            Matrix& ga = grad_of(a);
            ensure_grad(ga, da.rows, da.cols);
            for (std::size_t i = 0; i < da.data.size(); ++i) ga.data[i] += da.data[i];
        }
        if (needs_grad(b)) {
            Matrix db;
            aptfs::matmul_tn(g, value(a), db);  // dB = G' A
            Matrix& gb = grad_of(b);
            ensure_grad(gb, db.rows, db.cols);
            for (std::size_t i = 0; i < db.data.size(); ++i) gb.data[i] += db.data[i];
        }
    };
    return o;
}

Var Tape::tanh(Var a) {
    Matrix out = value(a);
    for (double& v : out.data) v = std::tanh(v);
    const Var o = push(std::move(out), needs_grad(a));
    nodes_[o.id].pull = [this, a, o] {
        if (!needs_grad(a)) return;
        const Matrix& g = grad_of(o);
        const Matrix& y = value(o);
        Matrix& ga = grad_of(a);
        ensure_grad(ga, g.rows, g.cols);
        for (std::size_t i = 0; i < g.data.size(); ++i)
            ga.data[i] += g.data[i] * (1.0 - y.data[i] * y.data[i]);
    };
    return o;
}

Var Tape::softmax_rows(Var a) {
    Matrix out = value(a);
    for (std::size_t i = 0; i < out.rows; ++i) {
        double* row = out.row(i);
        const double hi = *std::max_element(row, row + out.cols);
        double sum = 0.0;
        for (std::size_t j = 0; j < out.cols; ++j) {
            row[j] = std::exp(row[j] - hi);
            sum += row[j];
        }
        for (std::size_t j = 0; j < out.cols; ++j) row[j] /= sum;
    }
    const Var o = push(std::move(out), needs_grad(a));
    nodes_[o.id].pull = [this, a, o] {
        if (!needs_grad(a)) return;
        const Matrix& g = grad_of(o);
        const Matrix& y = value(o);
        Matrix& ga = grad_of(a);
        ensure_grad(ga, g.rows, g.cols);
        for (std::size_t i = 0; i < g.rows; ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < g.cols; ++j) dot += g(i, j) * y(i, j);
            for (std::size_t j = 0; j < g.cols; ++j) ga(i, j) += y(i, j) * (g(i, j) - dot);
        }
    };
    return o;
}

Var Tape::mse_loss(Var pred, Matrix target) {
    check_same_shape(value(pred), target, "mse_loss");
    const Matrix& p = value(pred);
    const double inv = 1.0 / static_cast<double>(p.data.size());
    double loss = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        const double diff = p.data[i] - target.data[i];
        loss += diff * diff;
    }
    Matrix out(1, 1);
    out(0, 0) = loss * inv;
    const Var o = push(std::move(out), needs_grad(pred));
    nodes_[o.id].pull = [this, pred, t = std::move(target), inv, o] {
        if (!needs_grad(pred)) return;
        const double g = grad_of(o)(0, 0);
        const Matrix& p2 = value(pred);
        Matrix& gp = grad_of(pred);
        ensure_grad(gp, p2.rows, p2.cols);
        for (std::size_t i = 0; i < p2.data.size(); ++i)
            gp.data[i] += g * 2.0 * inv * (p2.data[i] - t.data[i]);
    };
    return o;
}

Var Tape::ce_loss(Var logits, std::vector<int> labels) {
    const Matrix& z = value(logits);
    if (labels.size() != z.rows) throw DataError("ce_loss: one label per row required");
    const double inv = 1.0 / static_cast<double>(z.rows);
    double loss = 0.0;
    for (std::size_t i = 0; i < z.rows; ++i) {
        const double* row = z.row(i);
        const double hi = *std::max_element(row, row + z.cols);
        double sum = 0.0;
        for (std::size_t j = 0; j < z.cols; ++j) sum += std::exp(row[j] - hi);
        loss += hi + std::log(sum) - row[static_cast<std::size_t>(labels[i])];
    }
    Matrix out(1, 1);
    out(0, 0) = loss * inv;
    const Var o = push(std::move(out), needs_grad(logits));
    nodes_[o.id].pull = [this, logits, l = std::move(labels), inv, o] {
        if (!needs_grad(logits)) return;
        const double g = grad_of(o)(0, 0);
        const Matrix& z2 = value(logits);
        Matrix& gz = grad_of(logits);
        ensure_grad(gz, z2.rows, z2.cols);
        for (std::size_t i = 0; i < z2.rows; ++i) {
            const double* row = z2.row(i);
            const double hi = *std::max_element(row, row + z2.cols);
            double sum = 0.0;
            for (std::size_t j = 0; j < z2.cols; ++j) sum += std::exp(row[j] - hi);
            for (std::size_t j = 0; j < z2.cols; ++j) {
                const double soft = std::exp(row[j] - hi) / sum;
                const double onehot = static_cast<std::size_t>(l[i]) == j ? 1.0 : 0.0;
                gz(i, j) += g * inv * (soft - onehot);
            }
        }
    };
    return o;
}

void Tape::backward(Var loss) {
    Matrix& seed = grad_of(loss);
    ensure_grad(seed, value(loss).rows, value(loss).cols);
    if (seed.data.size() != 1) throw DataError("backward: loss must be a 1x1 node");
    seed(0, 0) = 1.0;
    for (std::size_t i = nodes_.size(); i > 0; --i) {
        Node& node = nodes_[i - 1];
        if (!node.pull) continue;
        if (node.grad.data.empty()) continue;  // not on any path to the loss
        node.pull();
    }
}

}  // namespace aptfs::ad
