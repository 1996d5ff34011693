#pragma once

#include <cstddef>
#include <vector>

#include "gpoi/common.hpp"

namespace gpoi {

// Dense column-major matrix of doubles. Column-major is the project-wide
// layout (snapshot columns are appended contiguously) and is also the
// layout of the GPOI persistence format.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return a_.size(); }
    bool empty() const { return a_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return a_[i + j * rows_]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i + j * rows_]; }

    double* col(std::size_t j) { return a_.data() + j * rows_; }
    const double* col(std::size_t j) const { return a_.data() + j * rows_; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    bool all_finite() const;

    void set_col(std::size_t j, const Vector& v);
    Vector get_col(std::size_t j) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

enum class Trans { No, Yes };

// c = alpha * op(a) * op(b) + beta * c, column-major.
// Supported combinations: (No,No), (Yes,No), (No,Yes).
void gemm(Trans ta, Trans tb, double alpha, const DenseMatrix& a, const DenseMatrix& b,
          double beta, DenseMatrix& c);

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);       // a b
DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b);  // a^T b
DenseMatrix multiply_a_bt(const DenseMatrix& a, const DenseMatrix& b);  // a b^T

// y = alpha * op(a) x + beta * y
void gemv(Trans ta, double alpha, const DenseMatrix& a, const double* x, double beta, double* y);

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scaled(const DenseMatrix& a, double s);
void add_scaled_identity(DenseMatrix& a, double s);  // a += s*I

double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

// vector helpers
double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);
double max_abs(const Vector& x);
Vector subtract(const Vector& x, const Vector& y);

}  // namespace gpoi
