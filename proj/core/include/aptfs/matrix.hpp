#pragma once

#include <cstddef>
#include <vector>

namespace aptfs {

/// Dense row-major matrix of doubles. The one numeric container shared by the
/// dataset, the classifiers and the gradient engine.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }

    bool operator==(const Matrix& other) const = default;
};

/// C = A * B
void matmul(const Matrix& a, const Matrix& b, Matrix& out);
/// C = A * B^T
void matmul_nt(const Matrix& a, const Matrix& b, Matrix& out);
/// C = A^T * B
void matmul_tn(const Matrix& a, const Matrix& b, Matrix& out);

}  // namespace aptfs
