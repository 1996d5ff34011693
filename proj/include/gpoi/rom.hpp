#pragma once

#include <memory>
#include <string>

#include "gpoi/opinf.hpp"
#include "gpoi/pod.hpp"

namespace gpoi {

enum class RomKind { GpOpinf, SpG };

// Reduced model dy_r/dt = d_r grad H_r(y_r) with
// grad H_r(y_r) = k_r y_r + phi^T (quad (phi y_r)^2 + cubic (phi y_r)^3)
// and H_r(y_r) = H(phi y_r). k_r is the symmetrized congruence phi^T k phi,
// so the reduced gradient is exactly the gradient of the reduced energy.
struct RomSpec {
    RomKind kind = RomKind::GpOpinf;
    Structure structure = Structure::Conservative;
    std::string model;
    std::shared_ptr<const ReducedBasis> basis;
    DenseMatrix d_r;
    DenseMatrix k_r;
    double quad_coeff = 0.0;
    double cubic_coeff = 0.0;
    double cell_area = 1.0;
    Vector y_r0;
    double certificate = 0.0;
};

RomSpec assemble_gp_rom(std::shared_ptr<const ReducedBasis> basis, const InferredOperator& op,
                        const FomSpec& fom);

// Intrusive baseline with d_r = phi^T d phi.
RomSpec assemble_spg_rom(std::shared_ptr<const ReducedBasis> basis, const FomSpec& fom);

struct RomTrajectory {
    DenseMatrix reduced;         // r x (steps + 1)
    std::vector<double> energy;  // reduced energy H_r at every state
    IntegrateStats stats;
};

RomTrajectory simulate_rom(const RomSpec& rom, const TimeGrid& grid,
                           const PicardConfig& cfg = {});

DenseMatrix lift_trajectory(const RomSpec& rom, const DenseMatrix& reduced);

double rom_energy(const RomSpec& rom, const Vector& y_r);

}  // namespace gpoi
