#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "aptfs/autodiff.hpp"
#include "aptfs/rng.hpp"

using namespace aptfs;
using ad::Tape;
using ad::Var;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double scale = 1.0) {
    Matrix m(r, c);
    for (double& v : m.data) v = rng.uniform(-scale, scale);
    return m;
}

/// Central-difference check of d(scalar loss)/d(params[0]) for a graph builder
/// mapping parameter matrices to a 1x1 loss node.
void check_gradients(const std::vector<Matrix>& params,
                     const std::function<Var(Tape&, const std::vector<Var>&)>& build,
                     double tol = 1e-6) {
    Tape tape;
    std::vector<Var> vars;
    vars.reserve(params.size());
    for (const Matrix& p : params) vars.push_back(tape.param(p));
    const Var loss = build(tape, vars);
    REQUIRE(tape.value(loss).rows == 1);
    REQUIRE(tape.value(loss).cols == 1);
    tape.backward(loss);

    const double h = 1e-5;
    for (std::size_t p = 0; p < params.size(); ++p) {
        const Matrix& analytic = tape.grad(vars[p]);
        for (std::size_t i = 0; i < params[p].data.size(); ++i) {
            auto eval = [&](double delta) {
                std::vector<Matrix> bumped = params;
                bumped[p].data[i] += delta;
                Tape t2;
                std::vector<Var> v2;
                for (const Matrix& b : bumped) v2.push_back(t2.param(b));
                return t2.value(build(t2, v2))(0, 0);
            };
            const double numeric = (eval(h) - eval(-h)) / (2.0 * h);
            const double a = analytic.data[i];
            const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
            CHECK(std::abs(a - numeric) / denom <= tol);
        }
    }
}

}  // namespace

TEST_CASE("tape values: softmax rows sum to one, tanh saturates") {
    Tape tape;
    Matrix logits(2, 3);
    logits.data = {1.0, 2.0, 3.0, -5.0, 0.0, 5.0};
    const Var sm = tape.softmax_rows(tape.constant(logits));
    const Matrix& v = tape.value(sm);
    for (std::size_t r = 0; r < 2; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            sum += v(r, c);
            CHECK(v(r, c) > 0.0);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(v(0, 2) > v(0, 1));

    Matrix big(1, 2);
    big.data = {100.0, -100.0};
    const Var t = tape.tanh(tape.constant(big));
    CHECK(tape.value(t)(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tape.value(t)(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("gradients of add, add_row and affine") {
    Rng rng(21);
    const Matrix a = random_matrix(3, 4, rng);
    const Matrix b = random_matrix(3, 4, rng);
    const Matrix bias = random_matrix(1, 4, rng);
    const Matrix target = random_matrix(3, 4, rng);
    const Matrix offset = random_matrix(3, 4, rng);

    check_gradients({a, b}, [&](Tape& t, const std::vector<Var>& v) {
        return t.mse_loss(t.add(v[0], v[1]), target);
    });
    check_gradients({a, bias}, [&](Tape& t, const std::vector<Var>& v) {
        return t.mse_loss(t.add_row(v[0], v[1]), target);
    });
    check_gradients({a}, [&](Tape& t, const std::vector<Var>& v) {
        return t.mse_loss(t.affine(v[0], 1.7, offset), target);
    });
}

TEST_CASE("gradients of matmul in both orientations") {
    Rng rng(22);
    const Matrix a = random_matrix(3, 4, rng);
    const Matrix b = random_matrix(4, 2, rng);
    const Matrix bt = random_matrix(2, 4, rng);
    const Matrix target = random_matrix(3, 2, rng);

    check_gradients({a, b}, [&](Tape& t, const std::vector<Var>& v) {
        return t.mse_loss(t.matmul(v[0], v[1]), target);
    });
    check_gradients({a, bt}, [&](Tape& t, const std::vector<Var>& v) {
        return t.mse_loss(t.matmul_nt(v[0], v[1]), target);
    });
}

TEST_CASE("gradients of tanh and softmax through a loss") {
    Rng rng(23);
    const Matrix a = random_matrix(3, 4, rng);
    const Matrix target = random_matrix(3, 4, rng, 0.5);

    check_gradients({a}, [&](Tape& t, const std::vector<Var>& v) {
        return t.mse_loss(t.tanh(v[0]), target);
    });
    check_gradients({a}, [&](Tape& t, const std::vector<Var>& v) {
        return t.mse_loss(t.softmax_rows(v[0]), target);
    });
}

TEST_CASE("gradient of cross-entropy over logits") {
    Rng rng(24);
    const Matrix logits = random_matrix(5, 3, rng);
    const std::vector<int> labels{0, 2, 1, 2, 0};

    check_gradients({logits}, [&](Tape& t, const std::vector<Var>& v) {
        return t.ce_loss(v[0], labels);
    });
}

TEST_CASE("gradient flows through a two-layer composite") {
    Rng rng(25);
    const Matrix x = random_matrix(6, 4, rng);
    const Matrix w1 = random_matrix(4, 3, rng);
    const Matrix b1 = random_matrix(1, 3, rng);
    const Matrix w2 = random_matrix(3, 2, rng);
    const std::vector<int> labels{0, 1, 0, 1, 1, 0};

    check_gradients({w1, b1, w2}, [&](Tape& t, const std::vector<Var>& v) {
        const Var h = t.tanh(t.add_row(t.matmul(t.constant(x), v[0]), v[1]));
        return t.ce_loss(t.matmul(h, v[2]), labels);
    });
}

TEST_CASE("constants accumulate no gradient") {
    Tape tape;
    Matrix m(2, 2, 1.0);
    const Var c = tape.constant(m);
    const Var p = tape.param(m);
    const Var loss = tape.mse_loss(tape.add(c, p), Matrix(2, 2, 0.0));
    tape.backward(loss);
    const Matrix& gc = tape.grad(c);
    for (double v : gc.data) CHECK(v == 0.0);
    const Matrix& gp = tape.grad(p);
    for (double v : gp.data) CHECK(v != 0.0);
}
