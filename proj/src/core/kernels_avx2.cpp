// Compiled with -mavx2 on x86-64 (see src/CMakeLists.txt); on other targets
// this translation unit only provides the nullptr stub.

#include "aeelm/core/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace aeelm::kern {

namespace {

// Lane j of the accumulator matches lane j of the scalar reference; the
// horizontal reduction order ((l0+l2)+(l1+l3))+tail matches it too, and no
// fma is used, so results are bit-identical to the scalar kernel.
double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return ((lanes[0] + lanes[2]) + (lanes[1] + lanes[3])) + tail;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

double sum_sq_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(a + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * a[i];
    return ((lanes[0] + lanes[2]) + (lanes[1] + lanes[3])) + tail;
}

const Ops ops = {dot_avx2, axpy_avx2, sum_sq_avx2};

} // namespace

const Ops* avx2_ops() {
#if defined(__GNUC__) || defined(__clang__)
    if (!__builtin_cpu_supports("avx2")) return nullptr;
#endif
    return &ops;
}

} // namespace aeelm::kern

#else

namespace aeelm::kern {
const Ops* avx2_ops() { return nullptr; }
} // namespace aeelm::kern

#endif
