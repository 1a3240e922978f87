#include "aeelm/core/kernels.hpp"

#include "aeelm/core/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace aeelm::kern {

namespace {

const Ops* table_for(Backend b) {
    switch (b) {
        case Backend::scalar: return scalar_ops();
        case Backend::avx2: return avx2_ops();
        case Backend::neon: return neon_ops();
    }
    return nullptr;
}

Backend g_active = Backend::scalar;

const Ops* resolve() {
    if (const char* env = std::getenv("AEELM_KERNELS"); env && std::strcmp(env, "auto") != 0) {
        Backend want;
        if (std::strcmp(env, "scalar") == 0) want = Backend::scalar;
        else if (std::strcmp(env, "avx2") == 0) want = Backend::avx2;
        else if (std::strcmp(env, "neon") == 0) want = Backend::neon;
        else {
            std::fprintf(stderr, "aeelm: unknown AEELM_KERNELS value '%s', using scalar\n", env);
            g_active = Backend::scalar;
            return scalar_ops();
        }
        if (const Ops* t = table_for(want)) {
            g_active = want;
            return t;
        }
        std::fprintf(stderr, "aeelm: AEELM_KERNELS=%s unavailable on this CPU, using scalar\n", env);
        g_active = Backend::scalar;
        return scalar_ops();
    }
    if (const Ops* t = avx2_ops()) {
        g_active = Backend::avx2;
        return t;
    }
    if (const Ops* t = neon_ops()) {
        g_active = Backend::neon;
        return t;
    }
    g_active = Backend::scalar;
    return scalar_ops();
}

} // namespace

namespace detail {
const Ops*& active_ops() {
    static const Ops* ops = resolve();
    return ops;
}
} // namespace detail

bool backend_available(Backend b) { return table_for(b) != nullptr; }

Backend active_backend() {
    detail::active_ops();
    return g_active;
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

void force_backend(Backend b) {
    const Ops* t = table_for(b);
    if (!t) throw ConfigError(std::string("kernel backend unavailable: ") + backend_name(b));
    detail::active_ops() = t;
    g_active = b;
}

void reset_backend() { detail::active_ops() = resolve(); }

} // namespace aeelm::kern
