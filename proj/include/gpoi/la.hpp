#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gpoi/dense.hpp"

namespace gpoi {

// Periodic second-difference stencil matrix: -2 on the diagonal, 1 on the
// first off-diagonals and in the (0,n-1)/(n-1,0) corners.
DenseMatrix periodic_laplacian(std::size_t n);

// Periodic central-difference stencil matrix: +1 super-diagonal, -1
// sub-diagonal, -1 at (0,n-1), +1 at (n-1,0). Skew-symmetric.
DenseMatrix periodic_central_diff(std::size_t n);

// max_{i,j} |m_ij + m_ji|; zero exactly when m is skew-symmetric.
double skew_defect(const DenseMatrix& m);

struct SymEig {
    std::vector<double> values;  // ascending
    DenseMatrix vectors;         // orthonormal columns, vectors.col(k) <-> values[k]
};

// Symmetric eigendecomposition (Householder tridiagonalization followed by
// implicit-shift QL). Input must be square and symmetric to 1e-12 relative.
SymEig sym_eig(const DenseMatrix& m);

struct LuFactors {
    DenseMatrix lu;
    std::vector<std::size_t> piv;
    double cond_estimate = 0.0;  // max|u_ii| / min|u_ii|
};

LuFactors lu_factor(DenseMatrix a);
void lu_solve_inplace(const LuFactors& f, double* b);
Vector lu_solve(const LuFactors& f, const Vector& b);
DenseMatrix lu_solve(const LuFactors& f, const DenseMatrix& b);

// Lower Cholesky factor of a symmetric positive definite matrix;
// std::nullopt when the matrix is not positive definite.
std::optional<DenseMatrix> try_cholesky(const DenseMatrix& a);

// (l l^T)^{-1} for a lower-triangular factor l.
DenseMatrix cholesky_inverse(const DenseMatrix& l);

struct LyapunovSolution {
    DenseMatrix x;
    double residual = 0.0;       // ||g x + x g - q||_F / ||q||_F (0 when q = 0)
    std::size_t deflated = 0;    // entries zeroed because |lambda_i + lambda_j| <= tau
    double tau = 0.0;
};

// Solves g x + x g = q for symmetric g and skew-symmetric q through the
// eigendecomposition of g. Entries with |lambda_i + lambda_j| below
// tau_factor * max|lambda| are deflated to zero and counted, never dropped
// silently.
LyapunovSolution solve_sym_lyapunov(const DenseMatrix& g, const DenseMatrix& q,
                                    double tau_factor = 1e-14);

struct Svd {
    DenseMatrix u;              // rows x k left singular vectors (if requested)
    std::vector<double> sigma;  // descending, length k = min(rows, cols)
    DenseMatrix v;              // cols x k right singular vectors (if requested)
};

// Thin SVD via Golub-Kahan bidiagonalization with implicit-shift QR sweeps.
// Either side's vectors can be skipped; skipping the wide side keeps the
// cost and memory proportional to the thin dimension.
Svd svd(const DenseMatrix& a, bool want_u, bool want_v);

// Left singular vectors and singular values only.
Svd svd_left(const DenseMatrix& a);

}  // namespace gpoi
