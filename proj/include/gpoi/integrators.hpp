#pragma once

#include <functional>
#include <optional>

#include "gpoi/fom.hpp"
#include "gpoi/la.hpp"

namespace gpoi {

struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
};

struct PicardConfig {
    double tol = 1e-12;        // successive-iterate max-norm
    std::size_t max_iter = 100;
};

struct IntegrateStats {
    std::size_t steps = 0;
    std::size_t picard_total = 0;
    std::size_t picard_max = 0;
    double seconds = 0.0;
};

// Averaged nonlinear gradient along the segment [a, b]; receives the two
// endpoint states and must add nothing but the polynomial terms (the
// linear part is handled implicitly by the stepper).
using NonlinearAvg = std::function<void(const Vector& a, const Vector& b, Vector& out)>;

// Average-vector-field step for dy/dt = d grad H(y) with
// grad H = k y + nonlinear terms. The linear half of the averaged
// gradient sits on the left-hand side, so the step solves
//   (I - dt/2 d k) y+ = y + dt/2 d k y + dt d nbar(y, y+)
// with nbar iterated from y+ = y to the Picard tolerance. The fixed point
// is the exact AVF step; with no nonlinear terms a single solve
// reproduces the implicit midpoint rule.
class AvfStepper {
public:
    AvfStepper(const DenseMatrix& d, const DenseMatrix& k, NonlinearAvg nonlinear, double dt,
               PicardConfig cfg);

    Vector step(const Vector& y);

    std::size_t last_iterations() const { return last_iterations_; }
    std::size_t total_iterations() const { return total_iterations_; }
    std::size_t max_iterations() const { return max_iterations_; }

private:
    const DenseMatrix& d_;
    DenseMatrix w_;  // d k
    LuFactors lu_;
    NonlinearAvg nonlinear_;
    double dt_;
    PicardConfig cfg_;
    std::size_t last_iterations_ = 0;
    std::size_t total_iterations_ = 0;
    std::size_t max_iterations_ = 0;
};

struct Trajectory {
    DenseMatrix states;  // dim x (steps + 1)
    IntegrateStats stats;
};

// Midpoint rule for the purely linear system dy/dt = d k y.
DenseMatrix implicit_midpoint_linear(const DenseMatrix& d, const DenseMatrix& k, const Vector& y0,
                                     const TimeGrid& grid);

// Single AVF step of a full-order model.
Vector avf_step(const FomSpec& spec, const Vector& y, double dt, const PicardConfig& cfg = {});

// Integrates a full-order model over the grid: midpoint for purely linear
// gradients (a single Picard pass), AVF with Picard iteration otherwise.
Trajectory integrate(const FomSpec& spec, const Vector& y0, const TimeGrid& grid,
                     const PicardConfig& cfg = {});

// Averaged nonlinear gradient of a full-order model in state coordinates.
NonlinearAvg fom_nonlinear_avg(const FomSpec& spec);

}  // namespace gpoi
