// AVX2 kernel variants. This translation unit is the only one compiled
// with -mavx2 -mfma; it is reached only after a runtime cpuid check.
//
// Reductions use four independent accumulators combined in a fixed order,
// so results are deterministic for this backend (they may differ from the
// scalar backend by normal rounding; the equivalence tests bound that).
// Entry-wise kernels avoid FMA contraction and reproduce the scalar
// results exactly.

#include "gpoi/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <cmath>
#include <immintrin.h>

namespace gpoi::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), acc3);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    acc0 = _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3));
    double acc = hsum(acc0);
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d y0 = _mm256_loadu_pd(y + i);
        __m256d y1 = _mm256_loadu_pd(y + i + 4);
        y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), y0);
        y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), y1);
        _mm256_storeu_pd(y + i, y0);
        _mm256_storeu_pd(y + i + 4, y1);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) x[i] *= a;
}

void rot_avx2(double* x, double* y, double c, double s, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        const __m256d yi = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(x + i, _mm256_add_pd(_mm256_mul_pd(vc, xi), _mm256_mul_pd(vs, yi)));
        _mm256_storeu_pd(y + i, _mm256_sub_pd(_mm256_mul_pd(vc, yi), _mm256_mul_pd(vs, xi)));
    }
    for (; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi + s * yi;
        y[i] = c * yi - s * xi;
    }
}

double sumsq_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

double max_abs_avx2(const double* x, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d vm = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        vm = _mm256_max_pd(vm, _mm256_and_pd(mask, _mm256_loadu_pd(x + i)));
    }
    double buf[4];
    _mm256_storeu_pd(buf, vm);
    double m = buf[0];
    if (buf[1] > m) m = buf[1];
    if (buf[2] > m) m = buf[2];
    if (buf[3] > m) m = buf[3];
    for (; i < n; ++i) {
        const double a = std::fabs(x[i]);
        if (a > m) m = a;
    }
    return m;
}

void square_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(xi, xi));
    }
    for (; i < n; ++i) out[i] = x[i] * x[i];
}

void cube_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_mul_pd(xi, xi), xi));
    }
    for (; i < n; ++i) out[i] = (x[i] * x[i]) * x[i];
}

void segment_avg_quad_avx2(const double* a, const double* b, double* out, std::size_t n) {
    const __m256d third = _mm256_set1_pd(1.0 / 3.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ai = _mm256_loadu_pd(a + i);
        const __m256d bi = _mm256_loadu_pd(b + i);
        const __m256d sum = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(ai, ai), _mm256_mul_pd(ai, bi)), _mm256_mul_pd(bi, bi));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(sum, third));
    }
    const double third_s = 1.0 / 3.0;
    for (; i < n; ++i) {
        const double ai = a[i];
        const double bi = b[i];
        out[i] = ((ai * ai) + (ai * bi) + (bi * bi)) * third_s;
    }
}

void segment_avg_cubic_avx2(const double* a, const double* b, double* out, std::size_t n) {
    const __m256d quarter = _mm256_set1_pd(0.25);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ai = _mm256_loadu_pd(a + i);
        const __m256d bi = _mm256_loadu_pd(b + i);
        const __m256d a2 = _mm256_mul_pd(ai, ai);
        const __m256d b2 = _mm256_mul_pd(bi, bi);
        const __m256d sum =
            _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(a2, ai), _mm256_mul_pd(a2, bi)),
                          _mm256_add_pd(_mm256_mul_pd(ai, b2), _mm256_mul_pd(b2, bi)));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(sum, quarter));
    }
    for (; i < n; ++i) {
        const double ai = a[i];
        const double bi = b[i];
        const double a2 = ai * ai;
        const double b2 = bi * bi;
        out[i] = (((a2 * ai) + (a2 * bi)) + ((ai * b2) + (b2 * bi))) * 0.25;
    }
}

}  // namespace

const Ops* avx2_ops() noexcept {
    static const Ops table = {
        dot_avx2,         axpy_avx2,   scal_avx2,
        rot_avx2,         sumsq_avx2,  max_abs_avx2,
        square_avx2,      cube_avx2,   segment_avg_quad_avx2,
        segment_avg_cubic_avx2,
    };
    return &table;
}

}  // namespace gpoi::kernels

#else

namespace gpoi::kernels {
const Ops* avx2_ops() noexcept { return nullptr; }
}  // namespace gpoi::kernels

#endif
