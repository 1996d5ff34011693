#include "gpoi/dense.hpp"

#include <cmath>
#include <cstring>

#include "gpoi/kernels.hpp"

namespace gpoi {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const {
    for (double v : a_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void DenseMatrix::set_col(std::size_t j, const Vector& v) {
    if (v.size() != rows_) throw DimensionError("set_col: length mismatch");
    std::memcpy(col(j), v.data(), rows_ * sizeof(double));
}

Vector DenseMatrix::get_col(std::size_t j) const {
    return Vector(col(j), col(j) + rows_);
}

namespace {

void check_gemm_dims(Trans ta, Trans tb, const DenseMatrix& a, const DenseMatrix& b,
                     const DenseMatrix& c) {
    const std::size_t m = (ta == Trans::No) ? a.rows() : a.cols();
    const std::size_t ka = (ta == Trans::No) ? a.cols() : a.rows();
    const std::size_t kb = (tb == Trans::No) ? b.rows() : b.cols();
    const std::size_t n = (tb == Trans::No) ? b.cols() : b.rows();
    if (ka != kb || c.rows() != m || c.cols() != n) {
        throw DimensionError("gemm: incompatible shapes");
    }
}

}  // namespace

void gemm(Trans ta, Trans tb, double alpha, const DenseMatrix& a, const DenseMatrix& b,
          double beta, DenseMatrix& c) {
    check_gemm_dims(ta, tb, a, b, c);
    const std::size_t m = c.rows();
    const std::size_t n = c.cols();
    const std::size_t k = (ta == Trans::No) ? a.cols() : a.rows();

    if (beta == 0.0) {
        std::memset(c.data(), 0, c.size() * sizeof(double));
    } else if (beta != 1.0) {
        kernels::scal(beta, c.data(), c.size());
    }
    if (alpha == 0.0 || k == 0) return;

    if (ta == Trans::No && tb == Trans::No) {
        // column sweep: c(:,j) += alpha * b(l,j) * a(:,l)
        for (std::size_t j = 0; j < n; ++j) {
            double* cj = c.col(j);
            for (std::size_t l = 0; l < k; ++l) {
                const double blj = b(l, j);
                if (blj != 0.0) kernels::axpy(alpha * blj, a.col(l), cj, m);
            }
        }
    } else if (ta == Trans::Yes && tb == Trans::No) {
        // c(i,j) += alpha * a(:,i) . b(:,j)
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b.col(j);
            double* cj = c.col(j);
            for (std::size_t i = 0; i < m; ++i) {
                cj[i] += alpha * kernels::dot(a.col(i), bj, k);
            }
        }
    } else if (ta == Trans::No && tb == Trans::Yes) {
        // c(:,j) += alpha * b(j,l) * a(:,l)
        for (std::size_t j = 0; j < n; ++j) {
            double* cj = c.col(j);
            for (std::size_t l = 0; l < k; ++l) {
                const double bjl = b(j, l);
                if (bjl != 0.0) kernels::axpy(alpha * bjl, a.col(l), cj, m);
            }
        }
    } else {
        throw DimensionError("gemm: (T,T) combination not supported");
    }
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows(), b.cols());
    gemm(Trans::No, Trans::No, 1.0, a, b, 0.0, c);
    return c;
}

DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.cols(), b.cols());
    gemm(Trans::Yes, Trans::No, 1.0, a, b, 0.0, c);
    return c;
}

DenseMatrix multiply_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows(), b.rows());
    gemm(Trans::No, Trans::Yes, 1.0, a, b, 0.0, c);
    return c;
}

void gemv(Trans ta, double alpha, const DenseMatrix& a, const double* x, double beta, double* y) {
    const std::size_t m = (ta == Trans::No) ? a.rows() : a.cols();
    const std::size_t k = (ta == Trans::No) ? a.cols() : a.rows();
    if (beta == 0.0) {
        std::memset(y, 0, m * sizeof(double));
    } else if (beta != 1.0) {
        kernels::scal(beta, y, m);
    }
    if (alpha == 0.0) return;
    if (ta == Trans::No) {
        for (std::size_t l = 0; l < k; ++l) {
            if (x[l] != 0.0) kernels::axpy(alpha * x[l], a.col(l), y, m);
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            y[i] += alpha * kernels::dot(a.col(i), x, k);
        }
    }
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    }
    return t;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("add: shape mismatch");
    DenseMatrix c = a;
    kernels::axpy(1.0, b.data(), c.data(), c.size());
    return c;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("subtract: shape mismatch");
    }
    DenseMatrix c = a;
    kernels::axpy(-1.0, b.data(), c.data(), c.size());
    return c;
}

DenseMatrix scaled(const DenseMatrix& a, double s) {
    DenseMatrix c = a;
    kernels::scal(s, c.data(), c.size());
    return c;
}

void add_scaled_identity(DenseMatrix& a, double s) {
    if (a.rows() != a.cols()) throw DimensionError("add_scaled_identity: matrix not square");
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += s;
}

double frobenius_norm(const DenseMatrix& a) {
    return std::sqrt(kernels::sumsq(a.data(), a.size()));
}

double max_abs(const DenseMatrix& a) { return kernels::max_abs(a.data(), a.size()); }

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::fabs(a.data()[i] - b.data()[i]);
        if (d > m) m = d;
    }
    return m;
}

double dot(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw DimensionError("dot: length mismatch");
    return kernels::dot(x.data(), y.data(), x.size());
}

double norm2(const Vector& x) { return std::sqrt(kernels::sumsq(x.data(), x.size())); }

double max_abs(const Vector& x) { return kernels::max_abs(x.data(), x.size()); }

Vector subtract(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw DimensionError("subtract: length mismatch");
    Vector d = x;
    kernels::axpy(-1.0, y.data(), d.data(), d.size());
    return d;
}

}  // namespace gpoi
