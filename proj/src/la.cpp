#include "gpoi/la.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <string>

#include "gpoi/kernels.hpp"

namespace gpoi {

DenseMatrix periodic_laplacian(std::size_t n) {
    if (n < 3) throw DimensionError("periodic_laplacian: n must be at least 3");
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = -2.0;
        m(i, (i + 1) % n) = 1.0;
        m((i + 1) % n, i) = 1.0;
    }
    return m;
}

DenseMatrix periodic_central_diff(std::size_t n) {
    if (n < 3) throw DimensionError("periodic_central_diff: n must be at least 3");
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, (i + 1) % n) = 1.0;
        m((i + 1) % n, i) = -1.0;
    }
    return m;
}

double skew_defect(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("skew_defect: matrix not square");
    double worst = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            const double d = std::fabs(m(i, j) + m(j, i));
            if (d > worst) worst = d;
        }
    }
    return worst;
}

namespace {

double sym_defect(const DenseMatrix& m) {
    double worst = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const double d = std::fabs(m(i, j) - m(j, i));
            if (d > worst) worst = d;
        }
    }
    return worst;
}

inline double sign_like(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }

// Householder tridiagonalization with accumulation of the orthogonal
// transform, operating on a row-major scratch buffer.
void tridiagonalize(std::vector<double>& z, std::size_t n, std::vector<double>& d,
                    std::vector<double>& e) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return z[i * n + j]; };
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k < i; ++k) scale += std::fabs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (std::size_t k = 0; k < i; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j < i; ++j) {
                    at(j, i) = at(i, j) / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (std::size_t k = j + 1; k < i; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j < i; ++j) {
                    f = at(i, j);
                    const double gj = e[j] - hh * f;
                    e[j] = gj;
                    for (std::size_t k = 0; k <= j; ++k) at(j, k) -= f * e[k] + gj * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (std::size_t j = 0; j < i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k < i; ++k) g += at(i, k) * at(k, j);
                for (std::size_t k = 0; k < i; ++k) at(k, j) -= g * at(k, i);
            }
        }
        d[i] = at(i, i);
        at(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) at(j, i) = at(i, j) = 0.0;
    }
}

// Implicit-shift QL on the tridiagonal (d, e), rotating the columns of v.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, DenseMatrix& v) {
    const std::size_t n = d.size();
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) {
                    throw NumericalError("sym_eig: QL failed to converge after 50 iterations "
                                         "(eigenvalue index " + std::to_string(l) + ")");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + sign_like(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                bool underflow = false;
                std::size_t i = m;
                while (i-- > l) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    kernels::rot(v.col(i + 1), v.col(i), c, s, v.rows());
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

SymEig sym_eig(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw StructureError("sym_eig: matrix not square");
    const std::size_t n = m.rows();
    if (n == 0) throw DimensionError("sym_eig: empty matrix");
    const double scale = max_abs(m);
    if (sym_defect(m) > 1e-12 * scale) {
        throw StructureError("sym_eig: matrix not symmetric within 1e-12 relative");
    }

    std::vector<double> z(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) z[i * n + j] = m(i, j);
    }
    std::vector<double> d(n, 0.0);
    std::vector<double> e(n, 0.0);
    if (n == 1) {
        SymEig out;
        out.values = {m(0, 0)};
        out.vectors = DenseMatrix::identity(1);
        return out;
    }
    tridiagonalize(z, n, d, e);

    DenseMatrix v(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) v(i, j) = z[i * n + j];
    }
    ql_implicit(d, e, v);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    SymEig out;
    out.values.resize(n);
    out.vectors = DenseMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = d[order[k]];
        std::memcpy(out.vectors.col(k), v.col(order[k]), n * sizeof(double));
    }
    return out;
}

LuFactors lu_factor(DenseMatrix a) {
    if (a.rows() != a.cols()) throw DimensionError("lu_factor: matrix not square");
    const std::size_t n = a.rows();
    LuFactors f;
    f.piv.resize(n);
    double max_piv = 0.0;
    double min_piv = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::fabs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::fabs(a(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        f.piv[k] = p;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
        }
        const double piv = a(k, k);
        if (piv == 0.0) {
            throw NumericalError("lu_factor: matrix is singular at column " + std::to_string(k) +
                                 " (pivot magnitude ratio so far " +
                                 std::to_string(min_piv > 0 && max_piv > 0 ? max_piv / min_piv
                                                                           : 0.0) + ")");
        }
        const double am = std::fabs(piv);
        max_piv = std::max(max_piv, am);
        min_piv = std::min(min_piv, am);
        if (k + 1 < n) {
            kernels::scal(1.0 / piv, a.col(k) + k + 1, n - k - 1);
            for (std::size_t j = k + 1; j < n; ++j) {
                const double akj = a(k, j);
                if (akj != 0.0) kernels::axpy(-akj, a.col(k) + k + 1, a.col(j) + k + 1, n - k - 1);
            }
        }
    }
    f.cond_estimate = max_piv / min_piv;
    f.lu = std::move(a);
    return f;
}

void lu_solve_inplace(const LuFactors& f, double* b) {
    const std::size_t n = f.lu.rows();
    for (std::size_t k = 0; k < n; ++k) {
        if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (b[k] != 0.0) kernels::axpy(-b[k], f.lu.col(k) + k + 1, b + k + 1, n - k - 1);
    }
    for (std::size_t k = n; k-- > 0;) {
        b[k] /= f.lu(k, k);
        if (k > 0 && b[k] != 0.0) kernels::axpy(-b[k], f.lu.col(k), b, k);
    }
}

Vector lu_solve(const LuFactors& f, const Vector& b) {
    if (b.size() != f.lu.rows()) throw DimensionError("lu_solve: length mismatch");
    Vector x = b;
    lu_solve_inplace(f, x.data());
    return x;
}

DenseMatrix lu_solve(const LuFactors& f, const DenseMatrix& b) {
    if (b.rows() != f.lu.rows()) throw DimensionError("lu_solve: shape mismatch");
    DenseMatrix x = b;
    for (std::size_t j = 0; j < x.cols(); ++j) lu_solve_inplace(f, x.col(j));
    return x;
}

std::optional<DenseMatrix> try_cholesky(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("try_cholesky: matrix not square");
    const std::size_t n = a.rows();
    DenseMatrix l = a;
    for (std::size_t k = 0; k < n; ++k) {
        const double dkk = l(k, k);
        if (!(dkk > 0.0)) return std::nullopt;
        const double root = std::sqrt(dkk);
        l(k, k) = root;
        if (k + 1 < n) {
            kernels::scal(1.0 / root, l.col(k) + k + 1, n - k - 1);
            for (std::size_t j = k + 1; j < n; ++j) {
                kernels::axpy(-l(j, k), l.col(k) + j, l.col(j) + j, n - j);
            }
        }
    }
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) l(i, j) = 0.0;
    }
    return l;
}

DenseMatrix cholesky_inverse(const DenseMatrix& l) {
    const std::size_t n = l.rows();
    if (l.cols() != n) throw DimensionError("cholesky_inverse: factor not square");
    DenseMatrix x = DenseMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j) {
        double* b = x.col(j);
        // forward substitution l y = e_j
        for (std::size_t k = 0; k < n; ++k) {
            b[k] /= l(k, k);
            if (k + 1 < n && b[k] != 0.0) {
                kernels::axpy(-b[k], l.col(k) + k + 1, b + k + 1, n - k - 1);
            }
        }
        // backward substitution l^T z = y
        for (std::size_t k = n; k-- > 0;) {
            if (k + 1 < n) b[k] -= kernels::dot(l.col(k) + k + 1, b + k + 1, n - k - 1);
            b[k] /= l(k, k);
        }
    }
    return x;
}

LyapunovSolution solve_sym_lyapunov(const DenseMatrix& g, const DenseMatrix& q,
                                    double tau_factor) {
    if (g.rows() != g.cols() || q.rows() != q.cols()) {
        throw DimensionError("solve_sym_lyapunov: matrices must be square");
    }
    if (g.rows() != q.rows()) throw DimensionError("solve_sym_lyapunov: dimension mismatch");
    if (skew_defect(q) > 1e-12 * max_abs(q)) {
        throw StructureError("solve_sym_lyapunov: q not skew-symmetric within 1e-12");
    }

    const SymEig eig = sym_eig(g);  // validates symmetry of g
    const std::size_t n = g.rows();
    double lam_max = 0.0;
    for (double v : eig.values) lam_max = std::max(lam_max, std::fabs(v));
    const double tau = tau_factor * lam_max;

    DenseMatrix qt = multiply_at_b(eig.vectors, multiply(q, eig.vectors));
    std::size_t deflated = 0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double denom = eig.values[i] + eig.values[j];
            if (std::fabs(denom) > tau) {
                qt(i, j) /= denom;
            } else {
                qt(i, j) = 0.0;
                ++deflated;
            }
        }
    }

    LyapunovSolution out;
    out.x = multiply_a_bt(multiply(eig.vectors, qt), eig.vectors);
    out.deflated = deflated;
    out.tau = tau;
    DenseMatrix resid = add(multiply(g, out.x), multiply(out.x, g));
    kernels::axpy(-1.0, q.data(), resid.data(), resid.size());
    const double qn = frobenius_norm(q);
    out.residual = qn > 0.0 ? frobenius_norm(resid) / qn : 0.0;
    return out;
}

namespace {

// Golub-Kahan-Reinsch SVD core for an m x n work matrix with m >= n.
// The work matrix is overwritten with the left singular vectors when
// want_u is set. Reflector updates are organized as column sweeps so the
// column-major layout is streamed contiguously.
struct GkrResult {
    std::vector<double> sigma;  // unordered, length n
    DenseMatrix v;              // n x n when requested
};

GkrResult gkr_core(DenseMatrix& u, bool want_u, bool want_v) {
    const std::size_t m = u.rows();
    const std::size_t n = u.cols();
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<double> w(n, 0.0);
    std::vector<double> rv1(n, 0.0);
    std::vector<double> row_scratch(n, 0.0);
    std::vector<double> col_scratch(m, 0.0);

    double g = 0.0;
    double scale = 0.0;
    double anorm = 0.0;

    // bidiagonalization
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i + 1;
        rv1[i] = scale * g;
        g = scale = 0.0;
        double s = 0.0;
        {
            // left Householder annihilating column i below the diagonal
            for (std::size_t k = i; k < m; ++k) scale += std::fabs(u(k, i));
            if (scale != 0.0) {
                kernels::scal(1.0 / scale, u.col(i) + i, m - i);
                s = kernels::sumsq(u.col(i) + i, m - i);
                const double f = u(i, i);
                g = -sign_like(std::sqrt(s), f);
                const double h = f * g - s;
                u(i, i) = f - g;
                for (std::size_t j = lo; j < n; ++j) {
                    const double proj = kernels::dot(u.col(i) + i, u.col(j) + i, m - i);
                    kernels::axpy(proj / h, u.col(i) + i, u.col(j) + i, m - i);
                }
                kernels::scal(scale, u.col(i) + i, m - i);
            }
        }
        w[i] = scale * g;
        g = scale = 0.0;
        if (lo < n) {
            // right Householder annihilating row i beyond the superdiagonal
            for (std::size_t k = lo; k < n; ++k) scale += std::fabs(u(i, k));
            if (scale != 0.0) {
                s = 0.0;
                for (std::size_t k = lo; k < n; ++k) {
                    u(i, k) /= scale;
                    s += u(i, k) * u(i, k);
                }
                const double f = u(i, lo);
                g = -sign_like(std::sqrt(s), f);
                const double h = f * g - s;
                u(i, lo) = f - g;
                for (std::size_t k = lo; k < n; ++k) {
                    rv1[k] = u(i, k) / h;
                    row_scratch[k] = u(i, k);
                }
                if (lo < m) {
                    // rank-1 update of rows lo..m-1, done column-wise:
                    // col_scratch = sum_k u(i,k) * u(lo:,k); u(lo:,k) += rv1[k]*col_scratch
                    std::memset(col_scratch.data() + lo, 0, (m - lo) * sizeof(double));
                    for (std::size_t k = lo; k < n; ++k) {
                        kernels::axpy(row_scratch[k], u.col(k) + lo, col_scratch.data() + lo,
                                      m - lo);
                    }
                    for (std::size_t k = lo; k < n; ++k) {
                        kernels::axpy(rv1[k], col_scratch.data() + lo, u.col(k) + lo, m - lo);
                    }
                }
                for (std::size_t k = lo; k < n; ++k) u(i, k) *= scale;
            }
        }
        anorm = std::max(anorm, std::fabs(w[i]) + std::fabs(rv1[i]));
    }

    GkrResult out;
    if (want_v) {
        out.v = DenseMatrix(n, n);
        DenseMatrix& v = out.v;
        double gv = 0.0;
        std::size_t l = n;
        for (std::size_t ii = n; ii-- > 0;) {
            if (ii + 1 < n) {
                if (gv != 0.0) {
                    for (std::size_t k = l; k < n; ++k) row_scratch[k] = u(ii, k);
                    for (std::size_t j = l; j < n; ++j) {
                        v(j, ii) = (row_scratch[j] / row_scratch[l]) / gv;
                    }
                    for (std::size_t j = l; j < n; ++j) {
                        double sv = 0.0;
                        for (std::size_t k = l; k < n; ++k) sv += row_scratch[k] * v(k, j);
                        kernels::axpy(sv, v.col(ii) + l, v.col(j) + l, n - l);
                    }
                }
                for (std::size_t j = l; j < n; ++j) v(ii, j) = v(j, ii) = 0.0;
            }
            v(ii, ii) = 1.0;
            gv = rv1[ii];
            l = ii;
        }
    }
    if (want_u) {
        for (std::size_t ii = n; ii-- > 0;) {
            const std::size_t l = ii + 1;
            const double gu = w[ii];
            for (std::size_t j = l; j < n; ++j) u(ii, j) = 0.0;
            if (gu != 0.0) {
                const double ginv = 1.0 / gu;
                for (std::size_t j = l; j < n; ++j) {
                    const double proj = kernels::dot(u.col(ii) + l, u.col(j) + l, m - l);
                    const double f = (proj / u(ii, ii)) * ginv;
                    kernels::axpy(f, u.col(ii) + ii, u.col(j) + ii, m - ii);
                }
                kernels::scal(ginv, u.col(ii) + ii, m - ii);
            } else {
                std::memset(u.col(ii) + ii, 0, (m - ii) * sizeof(double));
            }
            u(ii, ii) += 1.0;
        }
    }

    // implicit-shift QR sweeps on the bidiagonal form. The deflation
    // threshold starts at eps*anorm and is raised by powers of eight after
    // unproductive sweeps; the raise is sticky across singular values.
    // Entries that far below the matrix norm are indistinguishable from
    // zero at backward-error level, and the noise floor left by long
    // rotation chains can sit a few multiples of eps*anorm above it.
    // The split test also accepts couplings negligible relative to their
    // neighbouring diagonal entries, and zeroes every entry it deflates.
    double tol_mult = 1.0;
    for (long k = static_cast<long>(n) - 1; k >= 0; --k) {
        for (int its = 0;; ++its) {
            if (its == 25 || its == 50 || its == 75) tol_mult = std::min(tol_mult * 8.0, 512.0);
            const double thresh = eps * anorm * tol_mult;
            bool need_cancel = true;
            long l;
            long nm = 0;
            for (l = k; l >= 0; --l) {
                nm = l - 1;
                if (l == 0) {
                    need_cancel = false;
                    break;
                }
                if (std::fabs(rv1[l]) <= thresh ||
                    std::fabs(rv1[l]) <= eps * (std::fabs(w[l]) + std::fabs(w[nm]))) {
                    rv1[l] = 0.0;
                    need_cancel = false;
                    break;
                }
                if (std::fabs(w[nm]) <= thresh) break;
            }
            if (need_cancel) {
                // cancel rv1[l] against the negligible w[l-1]
                double c = 0.0;
                double s = 1.0;
                for (long i = l; i <= k; ++i) {
                    double f = s * rv1[i];
                    rv1[i] = c * rv1[i];
                    if (std::fabs(f) <= thresh) break;
                    const double gg = w[i];
                    double h = std::hypot(f, gg);
                    w[i] = h;
                    h = 1.0 / h;
                    c = gg * h;
                    s = -f * h;
                    if (want_u) kernels::rot(u.col(nm), u.col(i), c, s, m);
                }
            }
            const double z = w[k];
            if (l == k) {
                if (z < 0.0) {
                    w[k] = -z;
                    if (want_v) kernels::scal(-1.0, out.v.col(k), n);
                    else if (want_u) kernels::scal(-1.0, u.col(k), m);
                }
                break;
            }
            if (its == 100) {
                throw NumericalError("svd: QR sweeps failed to converge after 100 iterations "
                                     "(singular value index " + std::to_string(k) + ")");
            }
            double x = w[l];
            nm = k - 1;
            double y = w[nm];
            double gg = rv1[nm];
            double h = rv1[k];
            double f = ((y - z) * (y + z) + (gg - h) * (gg + h)) / (2.0 * h * y);
            gg = std::hypot(f, 1.0);
            f = ((x - z) * (x + z) + h * ((y / (f + sign_like(gg, f))) - h)) / x;
            double c = 1.0;
            double s = 1.0;
            for (long j = l; j <= nm; ++j) {
                const long i = j + 1;
                gg = rv1[i];
                y = w[i];
                h = s * gg;
                gg = c * gg;
                double zz = std::hypot(f, h);
                rv1[j] = zz;
                c = f / zz;
                s = h / zz;
                f = x * c + gg * s;
                gg = gg * c - x * s;
                h = y * s;
                y *= c;
                if (want_v) kernels::rot(out.v.col(j), out.v.col(i), c, s, n);
                zz = std::hypot(f, h);
                w[j] = zz;
                if (zz != 0.0) {
                    zz = 1.0 / zz;
                    c = f * zz;
                    s = h * zz;
                }
                f = c * gg + s * y;
                x = c * y - s * gg;
                if (want_u) kernels::rot(u.col(j), u.col(i), c, s, m);
            }
            rv1[l] = 0.0;
            rv1[k] = f;
            w[k] = x;
        }
    }

    out.sigma = std::move(w);
    return out;
}

}  // namespace

Svd svd(const DenseMatrix& a, bool want_u, bool want_v) {
    if (a.rows() == 0 || a.cols() == 0) throw DimensionError("svd: empty matrix");
    const bool transposed = a.rows() < a.cols();
    DenseMatrix work = transposed ? transpose(a) : a;
    const std::size_t k = work.cols();  // thin dimension

    const bool core_u = transposed ? want_v : want_u;
    const bool core_v = transposed ? want_u : want_v;
    GkrResult res = gkr_core(work, core_u, core_v);

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return res.sigma[x] > res.sigma[y];
    });

    Svd out;
    out.sigma.resize(k);
    for (std::size_t j = 0; j < k; ++j) out.sigma[j] = res.sigma[order[j]];

    auto permute_cols = [&](const DenseMatrix& src) {
        DenseMatrix dst(src.rows(), k);
        for (std::size_t j = 0; j < k; ++j) {
            std::memcpy(dst.col(j), src.col(order[j]), src.rows() * sizeof(double));
        }
        return dst;
    };

    const DenseMatrix& core_u_mat = work;
    const DenseMatrix& core_v_mat = res.v;
    if (want_u) out.u = permute_cols(transposed ? core_v_mat : core_u_mat);
    if (want_v) out.v = permute_cols(transposed ? core_u_mat : core_v_mat);
    return out;
}

Svd svd_left(const DenseMatrix& a) { return svd(a, true, false); }

}  // namespace gpoi
