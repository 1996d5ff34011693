#pragma once

#include <string>
#include <vector>

#include "gpoi/integrators.hpp"

namespace gpoi {

// Training data for one or more parameter values: states y, gradient
// snapshots f (one per state column), and stencil time derivatives ydot.
// All three matrices share their shape; per-parameter blocks sit at
// offsets[i] .. offsets[i+1].
struct SnapshotSet {
    std::string model;
    DenseMatrix y;
    DenseMatrix f;
    DenseMatrix ydot;
    TimeGrid grid;
    std::vector<double> mus;
    std::vector<std::size_t> offsets;  // one per parameter block

    std::size_t cols() const { return y.cols(); }
};

// Second-order finite-difference stencil in time: one-sided at the first
// and last columns, central inside. Requires at least 3 columns.
DenseMatrix derivative_snapshots(const DenseMatrix& y, double dt);

// Simulates the model over the grid and assembles {y, f, ydot}. A stride
// keeps every stride-th column (the stencil then uses dt * stride). With
// fewer than 3 kept columns the stencil is undefined and ydot is left
// zero-filled. Derivative assembly can be skipped when only states and
// gradients are needed.
SnapshotSet collect_snapshots(const FomSpec& spec, const TimeGrid& grid,
                              const PicardConfig& cfg = {}, std::size_t stride = 1,
                              bool with_derivative = true);

// Builds a snapshot set from an existing trajectory (shared FOM runs).
SnapshotSet snapshots_from_trajectory(const FomSpec& spec, const DenseMatrix& states,
                                      const TimeGrid& grid, std::size_t stride = 1,
                                      bool with_derivative = true);

// Column-wise concatenation over parameters; blocks keep their offsets.
SnapshotSet concat_parametric(const std::vector<SnapshotSet>& sets);

}  // namespace gpoi
