#include "gpoi/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "gpoi/common.hpp"

namespace gpoi::kernels {
namespace {

std::atomic<Backend> g_backend{Backend::Scalar};

Backend initial_backend() {
    Backend b = avx2_supported() ? Backend::Avx2 : Backend::Scalar;
    if (const char* env = std::getenv("GPOI_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) {
            b = Backend::Scalar;
        } else if (std::strcmp(env, "avx2") == 0 && avx2_supported()) {
            b = Backend::Avx2;
        }
    }
    return b;
}

struct Init {
    Init() { g_backend.store(initial_backend(), std::memory_order_relaxed); }
};
const Init g_init;

}  // namespace

bool avx2_supported() noexcept {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") && avx2_ops() != nullptr;
#else
    return false;
#endif
}

Backend active() noexcept { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_supported()) {
        throw Error("kernel backend avx2 is not supported on this host");
    }
    g_backend.store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) noexcept {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

std::string_view backend_name() noexcept { return backend_name(active()); }

const Ops& ops() noexcept {
    if (active() == Backend::Avx2) {
        if (const Ops* t = avx2_ops()) return *t;
    }
    return scalar_ops();
}

}  // namespace gpoi::kernels
