#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the dense linear algebra layer.
// Every kernel has a scalar reference implementation and an AVX2 variant;
// the active backend is selected once at startup (cpuid + GPOI_KERNELS
// environment override) and can be switched explicitly in tests.
//
// Reduction order is fixed within each backend, so results are
// reproducible run-to-run for a given backend.

namespace gpoi::kernels {

enum class Backend { Scalar, Avx2 };

struct Ops {
    // y.x
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y += a*x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // x *= a
    void (*scal)(double a, double* x, std::size_t n);
    // Givens rotation: [x; y] <- [c*x + s*y; c*y - s*x]
    void (*rot)(double* x, double* y, double c, double s, std::size_t n);
    // sum of squares
    double (*sumsq)(const double* x, std::size_t n);
    // max_i |x_i|
    double (*max_abs)(const double* x, std::size_t n);
    // out = x^2 (entry-wise)
    void (*square)(const double* x, double* out, std::size_t n);
    // out = x^3 (entry-wise)
    void (*cube)(const double* x, double* out, std::size_t n);
    // out = (a^2 + a*b + b^2) / 3, the exact segment average of t -> t^2
    void (*segment_avg_quad)(const double* a, const double* b, double* out, std::size_t n);
    // out = (a^3 + a^2 b + a b^2 + b^3) / 4, the exact segment average of t -> t^3
    void (*segment_avg_cubic)(const double* a, const double* b, double* out, std::size_t n);
};

bool avx2_supported() noexcept;
Backend active() noexcept;
void set_backend(Backend b);  // throws gpoi::Error if the backend is unsupported
std::string_view backend_name() noexcept;
std::string_view backend_name(Backend b) noexcept;

const Ops& scalar_ops() noexcept;
const Ops* avx2_ops() noexcept;  // nullptr when not compiled in / unsupported
const Ops& ops() noexcept;

inline double dot(const double* x, const double* y, std::size_t n) { return ops().dot(x, y, n); }
inline void axpy(double a, const double* x, double* y, std::size_t n) { ops().axpy(a, x, y, n); }
inline void scal(double a, double* x, std::size_t n) { ops().scal(a, x, n); }
inline void rot(double* x, double* y, double c, double s, std::size_t n) { ops().rot(x, y, c, s, n); }
inline double sumsq(const double* x, std::size_t n) { return ops().sumsq(x, n); }
inline double max_abs(const double* x, std::size_t n) { return ops().max_abs(x, n); }
inline void square(const double* x, double* out, std::size_t n) { ops().square(x, out, n); }
inline void cube(const double* x, double* out, std::size_t n) { ops().cube(x, out, n); }
inline void segment_avg_quad(const double* a, const double* b, double* out, std::size_t n) {
    ops().segment_avg_quad(a, b, out, n);
}
inline void segment_avg_cubic(const double* a, const double* b, double* out, std::size_t n) {
    ops().segment_avg_cubic(a, b, out, n);
}

}  // namespace gpoi::kernels
