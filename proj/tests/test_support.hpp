#pragma once

// Shared helpers and independent oracles for the test suites. Everything in
// here deliberately avoids the library's own solvers where an oracle is
// meant to provide an independent cross-check.

#include <cmath>
#include <cstddef>
#include <vector>

#include "gpoi/common.hpp"
#include "gpoi/dense.hpp"

namespace testsup {

using gpoi::DenseMatrix;
using gpoi::Rng;
using gpoi::Vector;

inline DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.symmetric();
    return m;
}

inline Vector random_vector(Rng& rng, std::size_t n) {
    Vector v(n);
    for (auto& x : v) x = rng.symmetric();
    return v;
}

inline DenseMatrix random_symmetric(Rng& rng, std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            const double v = rng.symmetric();
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

inline DenseMatrix random_skew(Rng& rng, std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const double v = rng.symmetric();
            m(i, j) = v;
            m(j, i) = -v;
        }
    }
    return m;
}

// a a^T + shift*I: symmetric positive semi-definite (definite for shift > 0)
inline DenseMatrix random_psd(Rng& rng, std::size_t n, double shift = 0.0) {
    DenseMatrix a = random_matrix(rng, n, n);
    DenseMatrix g = gpoi::multiply_a_bt(a, a);
    for (std::size_t i = 0; i < n; ++i) g(i, i) += shift;
    return g;
}

// Plain triple-loop matrix product, the reference for gemm.
inline DenseMatrix naive_multiply(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    }
    return c;
}

// Self-contained Gaussian elimination with partial pivoting on plain
// vectors; used by oracles so they do not depend on the library's LU.
inline bool gauss_solve_indep(std::vector<std::vector<double>> a, std::vector<double>& b) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
        }
        if (a[p][k] == 0.0) return false;
        std::swap(a[p], a[k]);
        std::swap(b[p], b[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * b[j];
        b[k] = s / a[k][k];
    }
    return true;
}

inline double gauss_det_indep(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
        }
        if (a[p][k] == 0.0) return 0.0;
        if (p != k) {
            std::swap(a[p], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

// Characteristic-polynomial root oracle for symmetric matrices: bracket the
// real roots of det(m - lambda I) by a fine scan inside the Gershgorin
// bound, then bisect. Valid when the eigenvalues are simple.
inline std::vector<double> eig_roots_oracle(const DenseMatrix& m, std::size_t scan_steps = 40000) {
    const std::size_t n = m.rows();
    auto char_poly = [&](double lambda) {
        std::vector<std::vector<double>> a(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
            a[i][i] -= lambda;
        }
        return gauss_det_indep(a);
    };
    double radius = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::fabs(m(i, j));
        radius = std::max(radius, row);
    }
    const double lo = -radius - 1.0;
    const double hi = radius + 1.0;
    const double step = (hi - lo) / static_cast<double>(scan_steps);
    std::vector<double> roots;
    double prev_x = lo;
    double prev_p = char_poly(lo);
    for (std::size_t s = 1; s <= scan_steps; ++s) {
        const double x = lo + step * static_cast<double>(s);
        const double p = char_poly(x);
        if (prev_p == 0.0) {
            roots.push_back(prev_x);
        } else if (p != 0.0 && ((prev_p < 0.0) != (p < 0.0))) {
            double a = prev_x;
            double b = x;
            double pa = prev_p;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                const double pm = char_poly(mid);
                if (pm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((pa < 0.0) != (pm < 0.0)) {
                    b = mid;
                } else {
                    a = mid;
                    pa = pm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_p = p;
    }
    return roots;
}

// Dense Kronecker-system oracle for g x + x g = q:
// (I (x) g + g (x) I) vec(x) = vec(q), solved by the independent
// elimination above.
inline DenseMatrix lyapunov_oracle(const DenseMatrix& g, const DenseMatrix& q) {
    const std::size_t n = g.rows();
    const std::size_t nn = n * n;
    std::vector<std::vector<double>> k(nn, std::vector<double>(nn, 0.0));
    // vec is column-major: index (i, j) -> i + j*n
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = i + j * n;
            for (std::size_t p = 0; p < n; ++p) {
                k[row][p + j * n] += g(i, p);  // (g x) term
                k[row][i + p * n] += g(p, j);  // (x g) term, g symmetric
            }
        }
    }
    std::vector<double> rhs(nn);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) rhs[i + j * n] = q(i, j);
    }
    if (!gauss_solve_indep(std::move(k), rhs)) {
        throw gpoi::NumericalError("lyapunov oracle: singular Kronecker system");
    }
    DenseMatrix x(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) x(i, j) = rhs[i + j * n];
    }
    return x;
}

}  // namespace testsup
