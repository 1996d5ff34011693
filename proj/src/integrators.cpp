#include "gpoi/integrators.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <string>

#include "gpoi/kernels.hpp"

namespace gpoi {
namespace {

// Returns s when m == s*I, otherwise nothing.
std::optional<double> scaled_identity_factor(const DenseMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) return std::nullopt;
    const double s = m(0, 0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (m(i, j) != (i == j ? s : 0.0)) return std::nullopt;
        }
    }
    return s;
}

DenseMatrix step_matrix(const DenseMatrix& d, const DenseMatrix& k) {
    if (auto s = scaled_identity_factor(d)) return scaled(k, *s);
    return multiply(d, k);
}

}  // namespace

AvfStepper::AvfStepper(const DenseMatrix& d, const DenseMatrix& k, NonlinearAvg nonlinear,
                       double dt, PicardConfig cfg)
    : d_(d), w_(step_matrix(d, k)), nonlinear_(std::move(nonlinear)), dt_(dt), cfg_(cfg) {
    if (d.rows() != d.cols() || k.rows() != k.cols() || d.rows() != k.rows()) {
        throw DimensionError("AvfStepper: d and k must be square and of equal size");
    }
    if (!(dt > 0.0)) throw ParameterError("AvfStepper: dt must be positive");
    DenseMatrix m = scaled(w_, -0.5 * dt);
    add_scaled_identity(m, 1.0);
    try {
        lu_ = lu_factor(std::move(m));
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("AvfStepper: implicit step matrix is singular (") +
                             e.what() + ")");
    }
}

Vector AvfStepper::step(const Vector& y) {
    const std::size_t n = y.size();
    if (n != w_.rows()) throw DimensionError("AvfStepper::step: state length mismatch");

    Vector rhs0 = y;
    gemv(Trans::No, 0.5 * dt_, w_, y.data(), 1.0, rhs0.data());

    if (!nonlinear_) {
        Vector z = rhs0;
        lu_solve_inplace(lu_, z.data());
        last_iterations_ = 1;
        total_iterations_ += 1;
        max_iterations_ = std::max(max_iterations_, std::size_t{1});
        return z;
    }

    Vector z = y;
    Vector nl(n);
    Vector rhs(n);
    double delta = 0.0;
    for (std::size_t it = 1; it <= cfg_.max_iter; ++it) {
        nl.assign(n, 0.0);
        nonlinear_(y, z, nl);
        rhs = rhs0;
        gemv(Trans::No, dt_, d_, nl.data(), 1.0, rhs.data());
        lu_solve_inplace(lu_, rhs.data());
        delta = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = std::fabs(rhs[i] - z[i]);
            if (!std::isfinite(diff)) {
                finite = false;
                break;
            }
            if (diff > delta) delta = diff;
        }
        if (!finite) {
            throw ConvergenceError("AvfStepper: Picard iteration diverged to non-finite values "
                                   "after " + std::to_string(it) + " iterations");
        }
        z.swap(rhs);
        if (delta <= cfg_.tol) {
            last_iterations_ = it;
            total_iterations_ += it;
            max_iterations_ = std::max(max_iterations_, it);
            return z;
        }
    }
    throw ConvergenceError("AvfStepper: Picard iteration did not reach tol " +
                           std::to_string(cfg_.tol) + " within " + std::to_string(cfg_.max_iter) +
                           " iterations (last residual " + std::to_string(delta) + ")");
}

DenseMatrix implicit_midpoint_linear(const DenseMatrix& d, const DenseMatrix& k, const Vector& y0,
                                     const TimeGrid& grid) {
    if (y0.size() != d.rows()) throw DimensionError("implicit_midpoint_linear: length mismatch");
    AvfStepper stepper(d, k, NonlinearAvg{}, grid.dt > 0.0 ? grid.dt : 1.0, PicardConfig{});
    DenseMatrix traj(y0.size(), grid.steps + 1);
    traj.set_col(0, y0);
    Vector y = y0;
    for (std::size_t s = 0; s < grid.steps; ++s) {
        y = stepper.step(y);
        traj.set_col(s + 1, y);
    }
    return traj;
}

NonlinearAvg fom_nonlinear_avg(const FomSpec& spec) {
    if (spec.quad_coeff == 0.0 && spec.cubic_coeff == 0.0) return {};
    const double quad = spec.quad_coeff;
    const double cubic = spec.cubic_coeff;
    return [quad, cubic](const Vector& a, const Vector& b, Vector& out) {
        const std::size_t n = a.size();
        Vector scratch(n);
        if (quad != 0.0) {
            kernels::segment_avg_quad(a.data(), b.data(), scratch.data(), n);
            kernels::axpy(quad, scratch.data(), out.data(), n);
        }
        if (cubic != 0.0) {
            kernels::segment_avg_cubic(a.data(), b.data(), scratch.data(), n);
            kernels::axpy(cubic, scratch.data(), out.data(), n);
        }
    };
}

Vector avf_step(const FomSpec& spec, const Vector& y, double dt, const PicardConfig& cfg) {
    AvfStepper stepper(spec.d, spec.k, fom_nonlinear_avg(spec), dt, cfg);
    return stepper.step(y);
}

Trajectory integrate(const FomSpec& spec, const Vector& y0, const TimeGrid& grid,
                     const PicardConfig& cfg) {
    if (y0.size() != spec.dim) throw DimensionError("integrate: initial state length mismatch");
    Trajectory out;
    out.states = DenseMatrix(spec.dim, grid.steps + 1);
    out.states.set_col(0, y0);
    out.stats.steps = grid.steps;
    if (grid.steps == 0) return out;

    const auto t_start = std::chrono::steady_clock::now();
    AvfStepper stepper(spec.d, spec.k, fom_nonlinear_avg(spec), grid.dt, cfg);
    Vector y = y0;
    for (std::size_t s = 0; s < grid.steps; ++s) {
        y = stepper.step(y);
        out.states.set_col(s + 1, y);
    }
    out.stats.picard_total = stepper.total_iterations();
    out.stats.picard_max = stepper.max_iterations();
    out.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

}  // namespace gpoi
