#include "gpoi/kernels.hpp"

#include <cmath>

// Scalar reference kernels. These define the semantics the SIMD variants
// are tested against. Loops are kept in the plainest possible form.

namespace gpoi::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void rot_scalar(double* x, double* y, double c, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi + s * yi;
        y[i] = c * yi - s * xi;
    }
}

double sumsq_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(x[i]);
        if (a > m) m = a;
    }
    return m;
}

void square_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * x[i];
}

void cube_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] * x[i]) * x[i];
}

// Exact averages of t^2 and t^3 along the segment (1-s)a + s b, s in [0,1].
// The expression shapes match the AVX2 variants so the two backends agree
// bit-for-bit on these entry-wise kernels.
void segment_avg_quad_scalar(const double* a, const double* b, double* out, std::size_t n) {
    const double third = 1.0 / 3.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ai = a[i];
        const double bi = b[i];
        out[i] = ((ai * ai) + (ai * bi) + (bi * bi)) * third;
    }
}

void segment_avg_cubic_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ai = a[i];
        const double bi = b[i];
        const double a2 = ai * ai;
        const double b2 = bi * bi;
        out[i] = (((a2 * ai) + (a2 * bi)) + ((ai * b2) + (b2 * bi))) * 0.25;
    }
}

}  // namespace

const Ops& scalar_ops() noexcept {
    static const Ops table = {
        dot_scalar,         axpy_scalar,   scal_scalar,
        rot_scalar,         sumsq_scalar,  max_abs_scalar,
        square_scalar,      cube_scalar,   segment_avg_quad_scalar,
        segment_avg_cubic_scalar,
    };
    return table;
}

}  // namespace gpoi::kernels
