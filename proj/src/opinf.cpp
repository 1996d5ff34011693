#include "gpoi/opinf.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "gpoi/kernels.hpp"

namespace gpoi {

const char* variant_name(InferenceVariant v) {
    switch (v) {
        case InferenceVariant::V: return "v";
        case InferenceVariant::P: return "p";
        case InferenceVariant::GP: return "gp";
        case InferenceVariant::Dissipative: return "dissipative";
    }
    return "?";
}

InferenceVariant variant_from_name(const std::string& name) {
    if (name == "v") return InferenceVariant::V;
    if (name == "p") return InferenceVariant::P;
    if (name == "gp") return InferenceVariant::GP;
    if (name == "dissipative") return InferenceVariant::Dissipative;
    throw ConfigError("unknown inference variant '" + name + "'");
}

namespace {

void check_projected_shapes(const DenseMatrix& ydot_r, const DenseMatrix& f_r) {
    if (ydot_r.rows() != f_r.rows() || ydot_r.cols() != f_r.cols()) {
        throw DimensionError("infer: ydot_r and f_r must share their shape");
    }
    if (ydot_r.rows() == 0) throw DimensionError("infer: empty projected data");
}

// q = ydot_r f_r^T - f_r ydot_r^T assembled entry-wise so it is exactly skew.
DenseMatrix skew_rhs(const DenseMatrix& ydot_r, const DenseMatrix& f_r) {
    DenseMatrix a = multiply_a_bt(ydot_r, f_r);
    const std::size_t r = a.rows();
    DenseMatrix q(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t i = 0; i < r; ++i) q(i, j) = a(i, j) - a(j, i);
    }
    return q;
}

}  // namespace

double operator_residual(const DenseMatrix& d_r, const DenseMatrix& ydot_r,
                         const DenseMatrix& f_r) {
    DenseMatrix resid = ydot_r;
    gemm(Trans::No, Trans::No, -1.0, d_r, f_r, 1.0, resid);
    return frobenius_norm(resid);
}

InferredOperator infer_conservative_v(const DenseMatrix& ydot_r, const DenseMatrix& f_r) {
    check_projected_shapes(ydot_r, f_r);
    const DenseMatrix gram = multiply_a_bt(f_r, f_r);
    LyapunovSolution sol = solve_sym_lyapunov(gram, skew_rhs(ydot_r, f_r));
    InferredOperator op;
    op.variant = InferenceVariant::V;
    op.d_r = std::move(sol.x);
    op.certificate = skew_defect(op.d_r);
    op.deflated = sol.deflated;
    op.lyapunov_residual = sol.residual;
    op.residual = operator_residual(op.d_r, ydot_r, f_r);
    return op;
}

double regularization_epsilon(double lambda_min, double alpha, double c0) {
    if (!(alpha > 0.0) || !(c0 > 0.0)) {
        throw ParameterError("regularization_epsilon: alpha and c0 must be positive");
    }
    if (lambda_min <= c0) return std::max(c0, alpha * std::fabs(lambda_min));
    return 0.0;
}

InferredOperator infer_conservative_p(const DenseMatrix& ydot_r, const DenseMatrix& f_r,
                                      double alpha, double c0) {
    check_projected_shapes(ydot_r, f_r);
    const DenseMatrix gram = multiply_a_bt(f_r, f_r);
    const SymEig eig = sym_eig(gram);
    const double eps = regularization_epsilon(eig.values.front(), alpha, c0);

    InferredOperator op;
    op.variant = InferenceVariant::P;
    op.epsilon = eps;
    LyapunovSolution sol = [&] {
        if (eps == 0.0) return solve_sym_lyapunov(gram, skew_rhs(ydot_r, f_r));
        DenseMatrix shifted = gram;
        add_scaled_identity(shifted, eps);
        return solve_sym_lyapunov(shifted, skew_rhs(ydot_r, f_r));
    }();
    op.d_r = std::move(sol.x);
    op.certificate = skew_defect(op.d_r);
    op.deflated = sol.deflated;
    op.lyapunov_residual = sol.residual;
    op.residual = operator_residual(op.d_r, ydot_r, f_r);
    return op;
}

DenseMatrix antisymmetrize(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("antisymmetrize: matrix not square");
    const std::size_t n = m.rows();
    DenseMatrix x(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) x(i, j) = 0.5 * (m(i, j) - m(j, i));
    }
    return x;
}

InferredOperator infer_conservative_gp(const DenseMatrix& ydot_r, const DenseMatrix& f_r) {
    InferredOperator op = infer_conservative_v(ydot_r, f_r);
    op.variant = InferenceVariant::GP;
    op.d_r = antisymmetrize(op.d_r);
    op.certificate = skew_defect(op.d_r);
    op.residual = operator_residual(op.d_r, ydot_r, f_r);
    return op;
}

DenseMatrix symmetric_part(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("symmetric_part: matrix not square");
    const std::size_t n = m.rows();
    DenseMatrix s(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) s(i, j) = 0.5 * (m(i, j) + m(j, i));
    }
    return s;
}

double dissipative_objective_f(const DenseMatrix& d, const DenseMatrix& ydot_r,
                               const DenseMatrix& f_r) {
    const double r = operator_residual(d, ydot_r, f_r);
    return r * r;
}

double dissipative_barrier_g(const DenseMatrix& d) {
    DenseMatrix neg_sym = scaled(symmetric_part(d), -1.0);
    auto chol = try_cholesky(neg_sym);
    if (!chol) {
        throw NumericalError("dissipative_barrier_g: point is infeasible "
                             "(symmetric part not negative definite)");
    }
    double g = 0.0;
    for (std::size_t i = 0; i < chol->rows(); ++i) g += 2.0 * std::log((*chol)(i, i));
    return g;
}

DenseMatrix dissipative_grad_f(const DenseMatrix& d, const DenseMatrix& ydot_r,
                               const DenseMatrix& f_r) {
    DenseMatrix resid = ydot_r;
    gemm(Trans::No, Trans::No, -1.0, d, f_r, 1.0, resid);
    return scaled(multiply_a_bt(resid, f_r), -2.0);
}

DenseMatrix dissipative_grad_g(const DenseMatrix& d) {
    DenseMatrix neg_sym = scaled(symmetric_part(d), -1.0);
    auto chol = try_cholesky(neg_sym);
    if (!chol) {
        throw NumericalError("dissipative_grad_g: point is infeasible");
    }
    return scaled(cholesky_inverse(*chol), -1.0);
}

InferredOperator infer_dissipative(const DenseMatrix& ydot_r, const DenseMatrix& f_r,
                                   const BarrierConfig& cfg, BarrierTrace* trace) {
    check_projected_shapes(ydot_r, f_r);
    const std::size_t r = ydot_r.rows();

    // Gram-side data: f(d) = e0 - 2 <d, c> + <d p, d>, exact for any d.
    const DenseMatrix p = multiply_a_bt(f_r, f_r);
    const DenseMatrix c = multiply_a_bt(ydot_r, f_r);
    const double e0 = kernels::sumsq(ydot_r.data(), ydot_r.size());
    const double f_norm = frobenius_norm(f_r);

    auto frob_inner = [](const DenseMatrix& a, const DenseMatrix& b) {
        return kernels::dot(a.data(), b.data(), a.size());
    };
    auto f_of = [&](const DenseMatrix& d) {
        const DenseMatrix dp = multiply(d, p);
        return e0 - 2.0 * frob_inner(d, c) + frob_inner(dp, d);
    };
    auto grad_f_of = [&](const DenseMatrix& d) {
        // 2 (d p - c)
        DenseMatrix g = multiply(d, p);
        kernels::axpy(-1.0, c.data(), g.data(), g.size());
        kernels::scal(2.0, g.data(), g.size());
        return g;
    };
    auto barrier_of = [](const DenseMatrix& d, DenseMatrix& chol_out) -> bool {
        DenseMatrix neg_sym = scaled(symmetric_part(d), -1.0);
        auto chol = try_cholesky(neg_sym);
        if (!chol) return false;
        chol_out = std::move(*chol);
        return true;
    };
    auto barrier_value = [](const DenseMatrix& chol) {
        double g = 0.0;
        for (std::size_t i = 0; i < chol.rows(); ++i) g += 2.0 * std::log(chol(i, i));
        return g;
    };

    const double rho = std::max(1.0, f_norm > 0.0 ? frobenius_norm(ydot_r) / f_norm : 1.0);
    DenseMatrix d = scaled(DenseMatrix::identity(r), -rho);
    DenseMatrix chol(r, r);
    if (!barrier_of(d, chol)) {
        throw NumericalError("infer_dissipative: initial point infeasible");
    }
    double f_val = f_of(d);
    double g_val = barrier_value(chol);

    InferredOperator op;
    op.variant = InferenceVariant::Dissipative;

    double beta = cfg.beta0;
    double grad_norm = 0.0;
    std::size_t accepted = 0;
    bool have_prev = false;
    DenseMatrix prev_grad(r, r);
    double prev_tau = 0.0;
    bool converged = false;
    std::size_t rounds_at_floor = 0;

    for (std::size_t outer = 0; outer < cfg.max_outer; ++outer) {
        if (trace) trace->round_offsets.push_back(trace->f_beta.size());
        f_val = f_of(d);  // refresh the accumulated value once per round
        bool round_converged = false;
        bool round_stalled = false;
        for (std::size_t inner = 0; inner < cfg.max_inner; ++inner) {
            const DenseMatrix gf = grad_f_of(d);
            // grad g = inv(sym(d)) = -(chol chol^T)^{-1}
            DenseMatrix grad = gf;
            DenseMatrix gg = scaled(cholesky_inverse(chol), -1.0);
            kernels::axpy(-beta, gg.data(), grad.data(), grad.size());
            grad_norm = frobenius_norm(grad);
            if (grad_norm <= cfg.grad_tol) {
                round_converged = true;
                break;
            }

            // Barzilai-Borwein trial step (safeguarded), Armijo backtracking
            double tau = 1.0;
            if (have_prev) {
                // after d -= prev_tau * prev_grad: delta_d = -prev_tau*prev_grad
                DenseMatrix dgrad = grad;
                kernels::axpy(-1.0, prev_grad.data(), dgrad.data(), dgrad.size());
                const double num = prev_tau * prev_tau * frob_inner(prev_grad, prev_grad);
                const double den = -prev_tau * frob_inner(prev_grad, dgrad);
                if (den > 0.0 && num > 0.0) {
                    tau = num / den;
                } else {
                    tau = 2.0 * prev_tau;
                }
                tau = std::min(std::max(tau, 1e-14), 1e14);
            } else {
                const double pnorm = frobenius_norm(p);
                tau = 1.0 / (1.0 + 2.0 * pnorm);
            }

            // analytic quadratic change of f along -grad avoids cancellation:
            // f(d - tau grad) - f(d) = -tau a1 + tau^2 a2
            const double a1 = frob_inner(grad, gf);
            const double a2 = frob_inner(multiply(grad, p), grad);
            bool accepted_step = false;
            DenseMatrix d_trial(r, r);
            DenseMatrix chol_trial(r, r);
            for (int halvings = 0; halvings < 80; ++halvings) {
                d_trial = d;
                kernels::axpy(-tau, grad.data(), d_trial.data(), d_trial.size());
                if (barrier_of(d_trial, chol_trial)) {
                    const double delta_f = -tau * a1 + tau * tau * a2;
                    const double g_new = barrier_value(chol_trial);
                    const double delta_fbeta = delta_f - beta * (g_new - g_val);
                    if (delta_fbeta <= -cfg.armijo * tau * grad_norm * grad_norm) {
                        std::swap(d, d_trial);
                        std::swap(chol, chol_trial);
                        f_val += delta_f;
                        g_val = g_new;
                        prev_grad = std::move(grad);
                        prev_tau = tau;
                        have_prev = true;
                        ++accepted;
                        accepted_step = true;
                        if (trace) trace->f_beta.push_back(f_val - beta * g_val);
                        break;
                    }
                }
                tau *= cfg.backtrack;
            }
            if (!accepted_step) {
                // For a finite feasible iterate a small enough step always
                // satisfies the sufficient-decrease test in exact
                // arithmetic, so exhausting the backtracking budget means
                // the achievable decrease fell below the f_beta evaluation
                // noise: the round is converged to working precision.
                // Anything non-finite is a genuine failure.
                if (!d.all_finite() || !std::isfinite(grad_norm)) {
                    throw ConvergenceError(
                        "infer_dissipative: line search rejected every step at beta=" +
                        std::to_string(beta) + " with non-finite iterate data after " +
                        std::to_string(accepted) + " accepted steps");
                }
                round_converged = grad_norm <= cfg.grad_tol;
                round_stalled = true;
                break;
            }
        }
        if (beta <= cfg.beta_floor) {
            ++rounds_at_floor;
            // the beta schedule is exhausted; stop on convergence, a
            // precision stall, or a bounded amount of extra polishing
            if (round_converged || round_stalled || rounds_at_floor >= 8) {
                converged = round_converged;
                break;
            }
        }
        beta = std::max(beta * cfg.sigma, cfg.beta_floor);
        have_prev = false;  // the objective changed with beta
    }

    op.d_r = std::move(d);
    op.iterations = accepted;
    op.grad_norm = grad_norm;
    op.beta_final = beta;
    op.converged = converged;
    op.residual = operator_residual(op.d_r, ydot_r, f_r);
    const SymEig eig = sym_eig(symmetric_part(op.d_r));
    op.certificate = eig.values.back();
    return op;
}

}  // namespace gpoi
