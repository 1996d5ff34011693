#pragma once

#include <string>
#include <vector>

#include "gpoi/rom.hpp"

namespace gpoi {

// All error measures follow the same quadrature convention: the sum runs
// over columns 1..N (the shared initial state is excluded) and is scaled
// by t_final * cell_area / N.

// sum_j ||y_fom(:,j) - y_rom(:,j)||^2 over j = 1..N, scaled.
double approx_error(const DenseMatrix& y_fom, const DenseMatrix& y_rom_lifted, double t_final,
                    double cell_area);

// sum_j ||y(:,j) - phi phi^T y(:,j)||^2, scaled.
double projection_error(const DenseMatrix& y, const ReducedBasis& basis, double t_final,
                        double cell_area);

// sum_j ||phi^T ydot(:,j) - d_r phi^T f(:,j)||^2, scaled.
double optimization_error(const DenseMatrix& ydot, const DenseMatrix& f,
                          const ReducedBasis& basis, const DenseMatrix& d_r, double t_final,
                          double cell_area);

// sum_j ||f(:,j) - phi phi^T f(:,j)||^2, scaled.
double grad_projection_error(const DenseMatrix& f, const ReducedBasis& basis, double t_final,
                             double cell_area);

std::vector<double> energy_series(const FomSpec& spec, const DenseMatrix& trajectory);
std::vector<double> energy_series(const RomSpec& rom, const DenseMatrix& reduced_trajectory);

// Richardson surrogate for the data error: compares the stencil at dt
// against the stencil at 2 dt on the even columns; the scaled square norm
// of (d_dt - d_2dt)/3 estimates the stencil truncation error.
double data_error_estimate(const DenseMatrix& y, double dt, double t_final, double cell_area);

struct ErrorReportRow {
    std::size_t r = 0;
    double e = 0.0;
    double e_proj = 0.0;
    double e_opt = 0.0;
    double e_proj_gradh = 0.0;  // NaN when not computed
    double certificate = 0.0;
    double fom_seconds = 0.0;
    double rom_seconds = 0.0;
};

struct ErrorReport {
    std::vector<ErrorReportRow> rows;  // keyed by r, ascending
    double t_final = 0.0;
    double cell_area = 1.0;
    std::size_t n_steps = 0;
};

// Fixed column order: r,E,E_proj,E_opt,E_proj_gradH,certificate,
// fom_seconds,rom_seconds.
void write_error_report_csv(const std::string& path, const ErrorReport& report);
ErrorReport read_error_report_csv(const std::string& path);

}  // namespace gpoi
