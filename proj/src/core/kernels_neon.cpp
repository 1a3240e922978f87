#include "aeelm/core/kernels.hpp"

#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

namespace aeelm::kern {

namespace {

// Two 128-bit accumulators cover lanes 0..1 and 2..3 of the scalar reference;
// reduction order matches, no fused multiply-add, so bits match the scalar
// kernel exactly.
double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    const double l0 = vgetq_lane_f64(acc01, 0);
    const double l1 = vgetq_lane_f64(acc01, 1);
    const double l2 = vgetq_lane_f64(acc23, 0);
    const double l3 = vgetq_lane_f64(acc23, 1);
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return ((l0 + l2) + (l1 + l3)) + tail;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vy = vld1q_f64(y + i);
        const float64x2_t vx = vld1q_f64(x + i);
        vst1q_f64(y + i, vaddq_f64(vy, vmulq_f64(va, vx)));
    }
    for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

double sum_sq_neon(const double* a, std::size_t n) {
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t v01 = vld1q_f64(a + i);
        const float64x2_t v23 = vld1q_f64(a + i + 2);
        acc01 = vaddq_f64(acc01, vmulq_f64(v01, v01));
        acc23 = vaddq_f64(acc23, vmulq_f64(v23, v23));
    }
    const double l0 = vgetq_lane_f64(acc01, 0);
    const double l1 = vgetq_lane_f64(acc01, 1);
    const double l2 = vgetq_lane_f64(acc23, 0);
    const double l3 = vgetq_lane_f64(acc23, 1);
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * a[i];
    return ((l0 + l2) + (l1 + l3)) + tail;
}

const Ops ops = {dot_neon, axpy_neon, sum_sq_neon};

} // namespace

const Ops* neon_ops() { return &ops; }

} // namespace aeelm::kern

#else

namespace aeelm::kern {
const Ops* neon_ops() { return nullptr; }
} // namespace aeelm::kern

#endif
