#include "gpoi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gpoi/io.hpp"
#include "gpoi/kernels.hpp"

namespace gpoi {
namespace {

void require_compare_columns(std::size_t cols) {
    if (cols < 2) {
        throw DimensionError("error measure: need at least one step beyond the initial state");
    }
}

double scale_factor(double t_final, double cell_area, std::size_t n) {
    return t_final * cell_area / static_cast<double>(n);
}

}  // namespace

double approx_error(const DenseMatrix& y_fom, const DenseMatrix& y_rom_lifted, double t_final,
                    double cell_area) {
    if (y_fom.rows() != y_rom_lifted.rows() || y_fom.cols() != y_rom_lifted.cols()) {
        throw DimensionError("approx_error: trajectory shapes differ");
    }
    require_compare_columns(y_fom.cols());
    const std::size_t n = y_fom.cols() - 1;
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double* a = y_fom.col(j);
        const double* b = y_rom_lifted.col(j);
        double col = 0.0;
        for (std::size_t i = 0; i < y_fom.rows(); ++i) {
            const double d = a[i] - b[i];
            col += d * d;
        }
        acc += col;
    }
    return scale_factor(t_final, cell_area, n) * acc;
}

namespace {

double reconstruction_error_sum(const DenseMatrix& x, const ReducedBasis& basis) {
    if (x.rows() != basis.rows()) throw DimensionError("error measure: dimension mismatch");
    require_compare_columns(x.cols());
    const std::size_t n = x.cols() - 1;
    double acc = 0.0;
    Vector col(x.rows());
    for (std::size_t j = 1; j <= n; ++j) {
        col = x.get_col(j);
        const Vector lifted = basis.lift(basis.project(col));
        double s = 0.0;
        for (std::size_t i = 0; i < col.size(); ++i) {
            const double d = col[i] - lifted[i];
            s += d * d;
        }
        acc += s;
    }
    return acc;
}

}  // namespace

double projection_error(const DenseMatrix& y, const ReducedBasis& basis, double t_final,
                        double cell_area) {
    const std::size_t n = y.cols() - 1;
    return scale_factor(t_final, cell_area, n) * reconstruction_error_sum(y, basis);
}

double grad_projection_error(const DenseMatrix& f, const ReducedBasis& basis, double t_final,
                             double cell_area) {
    const std::size_t n = f.cols() - 1;
    return scale_factor(t_final, cell_area, n) * reconstruction_error_sum(f, basis);
}

double optimization_error(const DenseMatrix& ydot, const DenseMatrix& f,
                          const ReducedBasis& basis, const DenseMatrix& d_r, double t_final,
                          double cell_area) {
    if (ydot.rows() != f.rows() || ydot.cols() != f.cols()) {
        throw DimensionError("optimization_error: data shapes differ");
    }
    require_compare_columns(ydot.cols());
    DenseMatrix ydot_r = basis.project_matrix(ydot);
    DenseMatrix f_r = basis.project_matrix(f);
    if (d_r.rows() != f_r.rows() || d_r.cols() != f_r.rows()) {
        throw DimensionError("optimization_error: operator size mismatch");
    }
    gemm(Trans::No, Trans::No, -1.0, d_r, f_r, 1.0, ydot_r);
    const std::size_t n = ydot.cols() - 1;
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        acc += kernels::sumsq(ydot_r.col(j), ydot_r.rows());
    }
    return scale_factor(t_final, cell_area, n) * acc;
}

std::vector<double> energy_series(const FomSpec& spec, const DenseMatrix& trajectory) {
    std::vector<double> out(trajectory.cols());
    Vector col(trajectory.rows());
    for (std::size_t j = 0; j < trajectory.cols(); ++j) {
        col = trajectory.get_col(j);
        out[j] = eval_energy(spec, col);
    }
    return out;
}

std::vector<double> energy_series(const RomSpec& rom, const DenseMatrix& reduced_trajectory) {
    std::vector<double> out(reduced_trajectory.cols());
    Vector col(reduced_trajectory.rows());
    for (std::size_t j = 0; j < reduced_trajectory.cols(); ++j) {
        col = reduced_trajectory.get_col(j);
        out[j] = rom_energy(rom, col);
    }
    return out;
}

double data_error_estimate(const DenseMatrix& y, double dt, double t_final, double cell_area) {
    if (y.cols() < 5) {
        throw DimensionError("data_error_estimate: need at least 5 columns");
    }
    const DenseMatrix fine = derivative_snapshots(y, dt);
    const std::size_t half_cols = (y.cols() + 1) / 2;
    DenseMatrix even(y.rows(), half_cols);
    for (std::size_t j = 0; j < half_cols; ++j) {
        for (std::size_t i = 0; i < y.rows(); ++i) even(i, j) = y(i, 2 * j);
    }
    const DenseMatrix coarse = derivative_snapshots(even, 2.0 * dt);
    double acc = 0.0;
    std::size_t counted = 0;
    for (std::size_t j = 1; j < half_cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < y.rows(); ++i) {
            const double d = (fine(i, 2 * j) - coarse(i, j)) / 3.0;
            s += d * d;
        }
        acc += s;
        ++counted;
    }
    return scale_factor(t_final, cell_area, counted) * acc;
}

void write_error_report_csv(const std::string& path, const ErrorReport& report) {
    std::vector<std::vector<double>> rows;
    rows.reserve(report.rows.size());
    for (const auto& r : report.rows) {
        rows.push_back({static_cast<double>(r.r), r.e, r.e_proj, r.e_opt, r.e_proj_gradh,
                        r.certificate, r.fom_seconds, r.rom_seconds});
    }
    write_csv(path,
              {"r", "E", "E_proj", "E_opt", "E_proj_gradH", "certificate", "fom_seconds",
               "rom_seconds"},
              rows);
}

ErrorReport read_error_report_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    if (t.header.size() != 8 || t.header[0] != "r" || t.header[1] != "E") {
        throw FormatError(path + ": unexpected error-report header");
    }
    ErrorReport report;
    for (const auto& row : t.rows) {
        if (row.size() != 8) throw FormatError(path + ": ragged error-report row");
        ErrorReportRow r;
        r.r = static_cast<std::size_t>(row[0]);
        r.e = row[1];
        r.e_proj = row[2];
        r.e_opt = row[3];
        r.e_proj_gradh = row[4];
        r.certificate = row[5];
        r.fom_seconds = row[6];
        r.rom_seconds = row[7];
        report.rows.push_back(r);
    }
    return report;
}

}  // namespace gpoi
