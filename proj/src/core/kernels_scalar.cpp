#include "aeelm/core/kernels.hpp"

namespace aeelm::kern {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        l0 += a[i] * b[i];
        l1 += a[i + 1] * b[i + 1];
        l2 += a[i + 2] * b[i + 2];
        l3 += a[i + 3] * b[i + 3];
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return ((l0 + l2) + (l1 + l3)) + tail;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

double sum_sq_scalar(const double* a, std::size_t n) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        l0 += a[i] * a[i];
        l1 += a[i + 1] * a[i + 1];
        l2 += a[i + 2] * a[i + 2];
        l3 += a[i + 3] * a[i + 3];
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * a[i];
    return ((l0 + l2) + (l1 + l3)) + tail;
}

const Ops ops = {dot_scalar, axpy_scalar, sum_sq_scalar};

} // namespace

const Ops* scalar_ops() { return &ops; }

} // namespace aeelm::kern
