#pragma once

#include <vector>

#include "gpoi/la.hpp"

namespace gpoi {

enum class InferenceVariant { V, P, GP, Dissipative };

const char* variant_name(InferenceVariant v);
InferenceVariant variant_from_name(const std::string& name);

struct InferredOperator {
    DenseMatrix d_r;
    InferenceVariant variant = InferenceVariant::GP;
    // skew defect for the conservative variants, max eigenvalue of the
    // symmetric part for the dissipative one
    double certificate = 0.0;
    double residual = 0.0;  // ||ydot_r - d_r f_r||_F
    // diagnostics
    double epsilon = 0.0;            // P regularization actually applied
    std::size_t deflated = 0;        // Lyapunov deflation count
    double lyapunov_residual = 0.0;  // relative Lyapunov residual
    std::size_t iterations = 0;      // dissipative: accepted descent steps
    double grad_norm = 0.0;          // dissipative: final ||grad f_beta||_F
    double beta_final = 0.0;
    bool converged = true;
};

// Barrier descent configuration: beta decays by sigma per outer round
// down to beta_floor; inner rounds run gradient descent with backtracking
// (factor `backtrack`, sufficient decrease `armijo`) until the gradient
// norm falls under grad_tol or the inner budget is spent.
struct BarrierConfig {
    double beta0 = 1e-2;
    double sigma = 0.5;
    double backtrack = 0.5;
    double armijo = 1e-4;
    double grad_tol = 1e-8;
    double beta_floor = 1e-10;
    std::size_t max_outer = 200;
    std::size_t max_inner = 2000;
};

// Solves f_r f_r^T d + d f_r f_r^T = ydot_r f_r^T - f_r ydot_r^T and
// returns the solution as-is; the certificate records its skew defect.
InferredOperator infer_conservative_v(const DenseMatrix& ydot_r, const DenseMatrix& f_r);

// Same equation with the coefficient shifted to f_r f_r^T + eps I, where
// eps = max(c0, alpha |min lambda|) when the smallest eigenvalue drops to
// c0 or below, and 0 otherwise (in which case the result is bit-for-bit
// the plain variant).
InferredOperator infer_conservative_p(const DenseMatrix& ydot_r, const DenseMatrix& f_r,
                                      double alpha = 2.0, double c0 = 1e-13);

// Antisymmetrized solution (d - d^T)/2 of the plain variant; skew exactly.
InferredOperator infer_conservative_gp(const DenseMatrix& ydot_r, const DenseMatrix& f_r);

// Frobenius-nearest skew-symmetric matrix.
DenseMatrix antisymmetrize(const DenseMatrix& m);

double regularization_epsilon(double lambda_min, double alpha, double c0);

// Log-barrier gradient descent for the negative-semi-definite constraint:
// minimizes ||ydot_r - d f_r||_F^2 - beta * sum log(-lambda_i(sym(d))).
// Feasibility (and the barrier value) are evaluated through the symmetric
// part of the iterate, which also carries the constraint for nonsymmetric
// matrices. Optionally records the f_beta value at every accepted step.
struct BarrierTrace {
    std::vector<double> f_beta;               // accepted-step objective values
    std::vector<std::size_t> round_offsets;   // start index of each beta round
};

InferredOperator infer_dissipative(const DenseMatrix& ydot_r, const DenseMatrix& f_r,
                                   const BarrierConfig& cfg = {},
                                   BarrierTrace* trace = nullptr);

// Pieces of the barrier objective, exposed for derivative cross-checks.
DenseMatrix symmetric_part(const DenseMatrix& m);
double dissipative_objective_f(const DenseMatrix& d, const DenseMatrix& ydot_r,
                               const DenseMatrix& f_r);
double dissipative_barrier_g(const DenseMatrix& d);  // throws when infeasible
DenseMatrix dissipative_grad_f(const DenseMatrix& d, const DenseMatrix& ydot_r,
                               const DenseMatrix& f_r);
DenseMatrix dissipative_grad_g(const DenseMatrix& d);  // inverse of sym(d)

double operator_residual(const DenseMatrix& d_r, const DenseMatrix& ydot_r,
                         const DenseMatrix& f_r);

}  // namespace gpoi
