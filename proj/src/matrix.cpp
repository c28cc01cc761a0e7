#include "clad/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace clad::nn {

bool Matrix::all_finite() const {
    for (const double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

namespace {

void check_inner(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string("matrix dimension mismatch in ") + what + ": " +
                                    std::to_string(a) + " vs " + std::to_string(b));
    }
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.rows, "matmul");
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        double* crow = &c.data[i * c.cols];
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            const double* brow = &b.data[k * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.cols, "matmul_nt");
    Matrix c(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = &b.data[j * b.cols];
            double sum = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) sum += arow[k] * brow[k];
            c(i, j) = sum;
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    check_inner(a.rows, b.rows, "matmul_tn");
    Matrix c(a.cols, b.cols);
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double* arow = &a.data[k * a.cols];
        const double* brow = &b.data[k * b.cols];
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double aki = arow[i];
            double* crow = &c.data[i * c.cols];
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
        }
    }
    return c;
}

}  // namespace clad::nn
