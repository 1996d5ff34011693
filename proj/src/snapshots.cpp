#include "gpoi/snapshots.hpp"

#include <cstring>

#include "gpoi/kernels.hpp"

namespace gpoi {

DenseMatrix derivative_snapshots(const DenseMatrix& y, double dt) {
    if (y.cols() < 3) {
        throw DimensionError("derivative_snapshots: need at least 3 columns of data");
    }
    if (!(dt > 0.0)) throw ParameterError("derivative_snapshots: dt must be positive");
    const std::size_t n = y.rows();
    const std::size_t s = y.cols() - 1;
    const double h = 1.0 / (2.0 * dt);
    DenseMatrix out(n, s + 1);

    // first column: (-3 y0 + 4 y1 - y2) / (2 dt)
    kernels::axpy(-3.0 * h, y.col(0), out.col(0), n);
    kernels::axpy(4.0 * h, y.col(1), out.col(0), n);
    kernels::axpy(-h, y.col(2), out.col(0), n);
    // interior: (y_{j+1} - y_{j-1}) / (2 dt)
    for (std::size_t j = 1; j < s; ++j) {
        kernels::axpy(h, y.col(j + 1), out.col(j), n);
        kernels::axpy(-h, y.col(j - 1), out.col(j), n);
    }
    // last column: (y_{s-2} - 4 y_{s-1} + 3 y_s) / (2 dt)
    kernels::axpy(h, y.col(s - 2), out.col(s), n);
    kernels::axpy(-4.0 * h, y.col(s - 1), out.col(s), n);
    kernels::axpy(3.0 * h, y.col(s), out.col(s), n);
    return out;
}

SnapshotSet snapshots_from_trajectory(const FomSpec& spec, const DenseMatrix& states,
                                      const TimeGrid& grid, std::size_t stride,
                                      bool with_derivative) {
    if (stride == 0) throw ParameterError("snapshots: stride must be at least 1");
    if (states.rows() != spec.dim) throw DimensionError("snapshots: state dimension mismatch");

    SnapshotSet set;
    set.model = spec.name;
    set.mus = {spec.mu};
    set.offsets = {0};

    const std::size_t kept = (states.cols() + stride - 1) / stride;
    set.y = DenseMatrix(spec.dim, kept);
    for (std::size_t c = 0, j = 0; j < states.cols(); j += stride, ++c) {
        std::memcpy(set.y.col(c), states.col(j), spec.dim * sizeof(double));
    }
    set.grid = TimeGrid{grid.t0, grid.dt * static_cast<double>(stride), kept - 1};

    set.f = DenseMatrix(spec.dim, kept);
    Vector col(spec.dim);
    for (std::size_t c = 0; c < kept; ++c) {
        col = set.y.get_col(c);
        Vector g = eval_gradient(spec, col);
        set.f.set_col(c, g);
    }

    if (with_derivative && kept >= 3) {
        set.ydot = derivative_snapshots(set.y, set.grid.dt);
    } else {
        set.ydot = DenseMatrix(spec.dim, kept);
    }
    return set;
}

SnapshotSet collect_snapshots(const FomSpec& spec, const TimeGrid& grid, const PicardConfig& cfg,
                              std::size_t stride, bool with_derivative) {
    Trajectory traj = integrate(spec, spec.y0, grid, cfg);
    return snapshots_from_trajectory(spec, traj.states, grid, stride, with_derivative);
}

SnapshotSet concat_parametric(const std::vector<SnapshotSet>& sets) {
    if (sets.empty()) throw DimensionError("concat_parametric: no snapshot sets");
    const std::size_t rows = sets.front().y.rows();
    const std::string& model = sets.front().model;
    std::size_t total = 0;
    for (const auto& s : sets) {
        if (s.y.rows() != rows) {
            throw StructureError("concat_parametric: row dimension mismatch");
        }
        if (s.model != model) {
            throw StructureError("concat_parametric: model name mismatch ('" + s.model +
                                 "' vs '" + model + "')");
        }
        if (s.grid.dt != sets.front().grid.dt) {
            throw StructureError("concat_parametric: time step mismatch between blocks");
        }
        total += s.cols();
    }

    SnapshotSet out;
    out.model = model;
    out.grid = sets.front().grid;
    out.y = DenseMatrix(rows, total);
    out.f = DenseMatrix(rows, total);
    out.ydot = DenseMatrix(rows, total);
    std::size_t off = 0;
    for (const auto& s : sets) {
        out.offsets.push_back(off);
        for (double mu : s.mus) out.mus.push_back(mu);
        const std::size_t bytes = rows * s.cols() * sizeof(double);
        std::memcpy(out.y.col(off), s.y.data(), bytes);
        std::memcpy(out.f.col(off), s.f.data(), bytes);
        std::memcpy(out.ydot.col(off), s.ydot.data(), bytes);
        off += s.cols();
    }
    return out;
}

}  // namespace gpoi
