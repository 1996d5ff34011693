#include "gpoi/rom.hpp"

#include <chrono>

#include "gpoi/kernels.hpp"

namespace gpoi {
namespace {

DenseMatrix symmetrized_congruence(const ReducedBasis& basis, const DenseMatrix& m) {
    DenseMatrix k_r = basis.congruence(m);
    const std::size_t r = k_r.rows();
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const double v = 0.5 * (k_r(i, j) + k_r(j, i));
            k_r(i, j) = v;
            k_r(j, i) = v;
        }
    }
    return k_r;
}

RomSpec assemble_common(std::shared_ptr<const ReducedBasis> basis, const FomSpec& fom) {
    if (!basis) throw DimensionError("assemble rom: basis is null");
    if (basis->rows() != fom.dim) {
        throw DimensionError("assemble rom: basis rows do not match the model dimension");
    }
    RomSpec rom;
    rom.structure = fom.structure;
    rom.model = fom.name;
    rom.basis = std::move(basis);
    rom.k_r = symmetrized_congruence(*rom.basis, fom.k);
    rom.quad_coeff = fom.quad_coeff;
    rom.cubic_coeff = fom.cubic_coeff;
    rom.cell_area = fom.cell_area;
    rom.y_r0 = rom.basis->project(fom.y0);
    return rom;
}

}  // namespace

RomSpec assemble_gp_rom(std::shared_ptr<const ReducedBasis> basis, const InferredOperator& op,
                        const FomSpec& fom) {
    RomSpec rom = assemble_common(std::move(basis), fom);
    if (op.d_r.rows() != rom.basis->rank()) {
        throw DimensionError("assemble_gp_rom: operator size does not match the basis rank");
    }
    rom.kind = RomKind::GpOpinf;
    rom.d_r = op.d_r;
    rom.certificate = op.certificate;
    return rom;
}

RomSpec assemble_spg_rom(std::shared_ptr<const ReducedBasis> basis, const FomSpec& fom) {
    RomSpec rom = assemble_common(std::move(basis), fom);
    rom.kind = RomKind::SpG;
    rom.d_r = rom.basis->congruence(fom.d);
    if (fom.structure == Structure::Conservative) {
        rom.certificate = skew_defect(rom.d_r);
    } else {
        rom.certificate = sym_eig(symmetric_part(rom.d_r)).values.back();
    }
    return rom;
}

double rom_energy(const RomSpec& rom, const Vector& y_r) {
    if (y_r.size() != rom.basis->rank()) throw DimensionError("rom_energy: length mismatch");
    Vector ky(y_r.size(), 0.0);
    gemv(Trans::No, 1.0, rom.k_r, y_r.data(), 0.0, ky.data());
    double h = 0.5 * kernels::dot(y_r.data(), ky.data(), y_r.size());
    if (rom.quad_coeff != 0.0 || rom.cubic_coeff != 0.0) {
        const Vector lifted = rom.basis->lift(y_r);
        Vector sq(lifted.size());
        kernels::square(lifted.data(), sq.data(), lifted.size());
        if (rom.quad_coeff != 0.0) {
            h += rom.quad_coeff / 3.0 * kernels::dot(sq.data(), lifted.data(), lifted.size());
        }
        if (rom.cubic_coeff != 0.0) {
            h += rom.cubic_coeff / 4.0 * kernels::sumsq(sq.data(), lifted.size());
        }
    }
    return rom.cell_area * h;
}

RomTrajectory simulate_rom(const RomSpec& rom, const TimeGrid& grid, const PicardConfig& cfg) {
    const std::size_t r = rom.basis->rank();
    if (rom.y_r0.size() != r) throw DimensionError("simulate_rom: initial state mismatch");

    NonlinearAvg nonlinear;
    if (rom.quad_coeff != 0.0 || rom.cubic_coeff != 0.0) {
        const ReducedBasis* basis = rom.basis.get();
        const double quad = rom.quad_coeff;
        const double cubic = rom.cubic_coeff;
        nonlinear = [basis, quad, cubic](const Vector& a, const Vector& b, Vector& out) {
            const Vector la = basis->lift(a);
            const Vector lb = basis->lift(b);
            Vector acc(la.size(), 0.0);
            Vector seg(la.size());
            if (quad != 0.0) {
                kernels::segment_avg_quad(la.data(), lb.data(), seg.data(), la.size());
                kernels::axpy(quad, seg.data(), acc.data(), la.size());
            }
            if (cubic != 0.0) {
                kernels::segment_avg_cubic(la.data(), lb.data(), seg.data(), la.size());
                kernels::axpy(cubic, seg.data(), acc.data(), la.size());
            }
            const Vector proj = basis->project(acc);
            kernels::axpy(1.0, proj.data(), out.data(), out.size());
        };
    }

    RomTrajectory out;
    out.reduced = DenseMatrix(r, grid.steps + 1);
    out.reduced.set_col(0, rom.y_r0);
    out.energy.resize(grid.steps + 1);
    out.energy[0] = rom_energy(rom, rom.y_r0);
    out.stats.steps = grid.steps;
    if (grid.steps == 0) return out;

    const auto t_start = std::chrono::steady_clock::now();
    AvfStepper stepper(rom.d_r, rom.k_r, nonlinear, grid.dt, cfg);
    Vector y = rom.y_r0;
    for (std::size_t s = 0; s < grid.steps; ++s) {
        y = stepper.step(y);
        out.reduced.set_col(s + 1, y);
        out.energy[s + 1] = rom_energy(rom, y);
    }
    out.stats.picard_total = stepper.total_iterations();
    out.stats.picard_max = stepper.max_iterations();
    out.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

DenseMatrix lift_trajectory(const RomSpec& rom, const DenseMatrix& reduced) {
    return rom.basis->lift_matrix(reduced);
}

}  // namespace gpoi
