#pragma once

#include <cstddef>
#include <vector>

namespace clad::nn {

// Dense row-major matrix of doubles. Batches are rows, features are columns.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // rows * cols, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }
    bool all_finite() const;
};

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);
// C = A * B^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// C = A^T * B
Matrix matmul_tn(const Matrix& a, const Matrix& b);

}  // namespace clad::nn
