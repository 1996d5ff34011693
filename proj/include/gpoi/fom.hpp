#pragma once

#include <string>

#include "gpoi/dense.hpp"

namespace gpoi {

enum class Structure { Conservative, Dissipative };

// A full-order gradient system dy/dt = d * grad H(y) with
//   grad H(y) = k y + quad_coeff * y^2 + cubic_coeff * y^3   (entry-wise powers)
//   H(y) = 1/2 y^T k y + quad_coeff/3 sum y^3 + cubic_coeff/4 sum y^4,
// and the reported energy scaled by the cell area (dx, or dx*dy in 2D).
// k is symmetric for every model, so grad H is exactly the gradient of H.
struct FomSpec {
    std::string name;
    std::size_t dim = 0;
    Structure structure = Structure::Conservative;
    double dx = 0.0;
    double dy = 0.0;
    double mu = 0.0;
    double cell_area = 1.0;
    DenseMatrix d;
    DenseMatrix k;
    double quad_coeff = 0.0;
    double cubic_coeff = 0.0;
    Vector y0;
};

// Piecewise-cubic bump used by the wave initial condition:
// 1 - 3/2 s^2 + 3/4 s^3 on [0,1], (2-s)^3/4 on (1,2], 0 beyond.
double wave_bump(double s);

// Linear wave equation on [0,1], periodic, state [u; v] of length 2n.
// mu parameterizes the initial pulse width and lives in [5, 15]; values
// outside the range throw unless extrapolation is explicitly allowed.
FomSpec wave_fom(std::size_t n, double c, double mu, bool allow_extrapolation = false);

// Korteweg-de Vries equation on [-20,20], periodic.
FomSpec kdv_fom(std::size_t n, double alpha, double nu, double mu);

// Allen-Cahn equation on [-1,1], periodic.
FomSpec allen_cahn_1d_fom(std::size_t n, double eps, double mu);

// Allen-Cahn equation on [-0.5,0.5]^2, periodic, n grid points per side,
// state length n^2 (x index fastest).
FomSpec allen_cahn_2d_fom(std::size_t n, double eps, double mu);

// Gradient system defined by matrices loaded from GPOI files. kind
// "linear" means grad H = k y; kind "cubic" adds the entry-wise y^3
// double-well term. y0_path may be empty (zero initial state).
FomSpec generic_fom_from_files(const std::string& d_path, const std::string& k_path,
                               const std::string& y0_path = "",
                               const std::string& kind = "linear");

Vector eval_gradient(const FomSpec& spec, const Vector& y);
double eval_energy(const FomSpec& spec, const Vector& y);

}  // namespace gpoi
