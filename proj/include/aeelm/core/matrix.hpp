#pragma once

#include "aeelm/core/kernels.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace aeelm {

using Vec = std::vector<double>;

// Dense row-major matrix. Rows are contiguous so the hot loops (dot per row,
// rank-1 updates via axpy) run straight through the kernel layer.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }
    std::span<const double> row_span(std::size_t r) const { return {row(r), cols_}; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    Vec& data() { return data_; }
    const Vec& data() const { return data_; }

    void fill(double v) { data_.assign(data_.size(), v); }

    bool operator==(const Matrix& o) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vec data_;
};

// y = A x
inline Vec matvec(const Matrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) throw std::invalid_argument("matvec: dimension mismatch");
    Vec y(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) y[r] = kern::dot(a.row(r), x.data(), a.cols());
    return y;
}

// A += u v^T
inline void add_outer(Matrix& a, std::span<const double> u, std::span<const double> v) {
    if (u.size() != a.rows() || v.size() != a.cols())
        throw std::invalid_argument("add_outer: dimension mismatch");
    for (std::size_t r = 0; r < a.rows(); ++r) kern::axpy(u[r], v.data(), a.row(r), a.cols());
}

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
    return t;
}

} // namespace aeelm
