#pragma once

#include <cstddef>

// Data-parallel inner loops used by the linear algebra and the trainers.
// The scalar reference kernels accumulate in four independent lanes laid out
// exactly like one 256-bit vector register, and every backend reduces the
// lanes in the same order, so scalar, AVX2 and NEON results are bit-identical
// (the build disables fp contraction for the same reason). Backend selection
// happens once at runtime: the AEELM_KERNELS environment variable
// (scalar|avx2|neon|auto) overrides CPU detection.

namespace aeelm::kern {

enum class Backend { scalar, avx2, neon };

struct Ops {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t); // y += a*x
    double (*sum_sq)(const double*, std::size_t);
};

const Ops* scalar_ops(); // always available
const Ops* avx2_ops();   // nullptr unless compiled in and CPU supports it
const Ops* neon_ops();   // nullptr unless compiled in

bool backend_available(Backend b);
Backend active_backend();
const char* backend_name(Backend b);
void force_backend(Backend b); // throws ConfigError if unavailable
void reset_backend();          // back to env/auto selection

namespace detail {
const Ops*& active_ops();
}

inline double dot(const double* a, const double* b, std::size_t n) {
    return detail::active_ops()->dot(a, b, n);
}

inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
    detail::active_ops()->axpy(alpha, x, y, n);
}

inline double sum_sq(const double* a, std::size_t n) {
    return detail::active_ops()->sum_sq(a, n);
}

} // namespace aeelm::kern
