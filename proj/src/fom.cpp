#include "gpoi/fom.hpp"

#include <cmath>
#include <numbers>

#include "gpoi/io.hpp"
#include "gpoi/kernels.hpp"
#include "gpoi/la.hpp"

namespace gpoi {

double wave_bump(double s) {
    if (s <= 1.0) return 1.0 - 1.5 * s * s + 0.75 * s * s * s;
    if (s <= 2.0) {
        const double w = 2.0 - s;
        return 0.25 * w * w * w;
    }
    return 0.0;
}

FomSpec wave_fom(std::size_t n, double c, double mu, bool allow_extrapolation) {
    if (n < 3) throw DimensionError("wave_fom: n must be at least 3");
    if (!(c > 0.0)) throw ParameterError("wave_fom: wave speed c must be positive");
    if ((mu < 5.0 || mu > 15.0) && !allow_extrapolation) {
        throw ParameterError("wave_fom: mu outside the training range [5, 15]; "
                             "set allow_extrapolation to proceed");
    }
    FomSpec spec;
    spec.name = "wave";
    spec.dim = 2 * n;
    spec.structure = Structure::Conservative;
    spec.dx = 1.0 / static_cast<double>(n);
    spec.mu = mu;
    spec.cell_area = spec.dx;

    const DenseMatrix a = scaled(periodic_laplacian(n), c * c / (spec.dx * spec.dx));
    spec.d = DenseMatrix(2 * n, 2 * n);
    spec.k = DenseMatrix(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        spec.d(i, n + i) = 1.0;
        spec.d(n + i, i) = -1.0;
        spec.k(n + i, n + i) = 1.0;
        for (std::size_t j = 0; j < n; ++j) spec.k(i, j) = -a(i, j);
    }

    spec.y0.assign(2 * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = static_cast<double>(j) * spec.dx;
        spec.y0[j] = wave_bump(mu * std::fabs(x - 0.5));
    }
    return spec;
}

FomSpec kdv_fom(std::size_t n, double alpha, double nu, double mu) {
    if (n < 3) throw DimensionError("kdv_fom: n must be at least 3");
    FomSpec spec;
    spec.name = "kdv";
    spec.dim = n;
    spec.structure = Structure::Conservative;
    spec.dx = 40.0 / static_cast<double>(n);
    spec.mu = mu;
    spec.cell_area = spec.dx;
    spec.d = scaled(periodic_central_diff(n), 1.0 / (2.0 * spec.dx));
    spec.k = scaled(periodic_laplacian(n), nu / (spec.dx * spec.dx));
    spec.quad_coeff = 0.5 * alpha;

    spec.y0.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = -20.0 + static_cast<double>(j) * spec.dx;
        const double sech = 1.0 / std::cosh(x / mu);
        spec.y0[j] = sech * sech;
    }
    return spec;
}

FomSpec allen_cahn_1d_fom(std::size_t n, double eps, double mu) {
    if (n < 3) throw DimensionError("allen_cahn_1d_fom: n must be at least 3");
    if (!(eps > 0.0)) throw ParameterError("allen_cahn_1d_fom: eps must be positive");
    FomSpec spec;
    spec.name = "allen_cahn_1d";
    spec.dim = n;
    spec.structure = Structure::Dissipative;
    spec.dx = 2.0 / static_cast<double>(n);
    spec.mu = mu;
    spec.cell_area = spec.dx;

    // grad H = -a u - u + u^3 with a = eps^2/dx^2 L_n
    spec.k = scaled(periodic_laplacian(n), -eps * eps / (spec.dx * spec.dx));
    add_scaled_identity(spec.k, -1.0);
    spec.cubic_coeff = 1.0;
    spec.d = scaled(DenseMatrix::identity(n), -1.0);

    spec.y0.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = -1.0 + static_cast<double>(j) * spec.dx;
        spec.y0[j] = mu * x * x * std::sin(2.0 * std::numbers::pi * x);
    }
    return spec;
}

FomSpec allen_cahn_2d_fom(std::size_t n, double eps, double mu) {
    if (n < 3) throw DimensionError("allen_cahn_2d_fom: n must be at least 3");
    if (!(eps > 0.0)) throw ParameterError("allen_cahn_2d_fom: eps must be positive");
    FomSpec spec;
    spec.name = "allen_cahn_2d";
    spec.dim = n * n;
    spec.structure = Structure::Dissipative;
    spec.dx = 1.0 / static_cast<double>(n);
    spec.dy = spec.dx;
    spec.mu = mu;
    spec.cell_area = spec.dx * spec.dy;

    // l = I (x) dxx + dyy (x) I on the vectorized grid (x index fastest);
    // grad H = -eps^2 l u - u + u^3
    const DenseMatrix stencil = periodic_laplacian(n);
    const double ax = 1.0 / (spec.dx * spec.dx);
    const double ay = 1.0 / (spec.dy * spec.dy);
    spec.k = DenseMatrix(n * n, n * n);
    const double scale = -eps * eps;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = i + j * n;
            for (std::size_t p = 0; p < n; ++p) {
                spec.k(row, p + j * n) += scale * ax * stencil(i, p);
                spec.k(row, i + p * n) += scale * ay * stencil(j, p);
            }
            spec.k(row, row) += -1.0;
        }
    }
    spec.cubic_coeff = 1.0;
    spec.d = scaled(DenseMatrix::identity(n * n), -1.0);

    const double r = 0.2;
    spec.y0.assign(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double y = -0.5 + static_cast<double>(j) * spec.dy;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -0.5 + static_cast<double>(i) * spec.dx;
            const double cx = r * (0.7 - mu);
            const double cy = r * mu;
            const double d1 = std::sqrt((x - cx) * (x - cx) + (y + cy) * (y + cy));
            const double d2 = std::sqrt((x + cx) * (x + cx) + (y - cy) * (y - cy));
            spec.y0[i + j * n] = std::max(std::tanh((r - d1) / eps), std::tanh((r - d2) / eps));
        }
    }
    return spec;
}

FomSpec generic_fom_from_files(const std::string& d_path, const std::string& k_path,
                               const std::string& y0_path, const std::string& kind) {
    FomSpec spec;
    spec.name = "generic";
    spec.d = read_matrix(d_path);
    spec.k = read_matrix(k_path);
    if (spec.d.rows() != spec.d.cols()) {
        throw StructureError("generic_fom_from_files: d must be square");
    }
    if (spec.k.rows() != spec.k.cols() || spec.k.rows() != spec.d.rows()) {
        throw StructureError("generic_fom_from_files: k must be square and match d");
    }
    double asym = 0.0;
    for (std::size_t j = 0; j < spec.k.cols(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            asym = std::max(asym, std::fabs(spec.k(i, j) - spec.k(j, i)));
        }
    }
    if (asym > 1e-10 * std::max(1.0, max_abs(spec.k))) {
        throw StructureError("generic_fom_from_files: k not symmetric within 1e-10");
    }
    spec.dim = spec.d.rows();
    if (kind == "linear") {
        // nothing beyond k
    } else if (kind == "cubic") {
        spec.cubic_coeff = 1.0;
    } else {
        throw ConfigError("generic_fom_from_files: unknown hamiltonian kind '" + kind + "'");
    }
    if (!y0_path.empty()) {
        DenseMatrix y0m = read_matrix(y0_path);
        if (y0m.cols() != 1 || y0m.rows() != spec.dim) {
            throw StructureError("generic_fom_from_files: y0 must be a dim x 1 matrix");
        }
        spec.y0 = y0m.get_col(0);
    } else {
        spec.y0.assign(spec.dim, 0.0);
    }
    spec.structure = skew_defect(spec.d) <= 1e-12 * std::max(1.0, max_abs(spec.d))
                         ? Structure::Conservative
                         : Structure::Dissipative;
    spec.cell_area = 1.0;
    return spec;
}

Vector eval_gradient(const FomSpec& spec, const Vector& y) {
    if (y.size() != spec.dim) throw DimensionError("eval_gradient: state length mismatch");
    Vector g(spec.dim, 0.0);
    gemv(Trans::No, 1.0, spec.k, y.data(), 0.0, g.data());
    if (spec.quad_coeff != 0.0 || spec.cubic_coeff != 0.0) {
        Vector scratch(spec.dim);
        if (spec.quad_coeff != 0.0) {
            kernels::square(y.data(), scratch.data(), spec.dim);
            kernels::axpy(spec.quad_coeff, scratch.data(), g.data(), spec.dim);
        }
        if (spec.cubic_coeff != 0.0) {
            kernels::cube(y.data(), scratch.data(), spec.dim);
            kernels::axpy(spec.cubic_coeff, scratch.data(), g.data(), spec.dim);
        }
    }
    return g;
}

double eval_energy(const FomSpec& spec, const Vector& y) {
    if (y.size() != spec.dim) throw DimensionError("eval_energy: state length mismatch");
    Vector ky(spec.dim, 0.0);
    gemv(Trans::No, 1.0, spec.k, y.data(), 0.0, ky.data());
    double h = 0.5 * kernels::dot(y.data(), ky.data(), spec.dim);
    if (spec.quad_coeff != 0.0 || spec.cubic_coeff != 0.0) {
        Vector sq(spec.dim);
        kernels::square(y.data(), sq.data(), spec.dim);
        if (spec.quad_coeff != 0.0) {
            h += spec.quad_coeff / 3.0 * kernels::dot(sq.data(), y.data(), spec.dim);
        }
        if (spec.cubic_coeff != 0.0) {
            h += spec.cubic_coeff / 4.0 * kernels::sumsq(sq.data(), spec.dim);
        }
    }
    return spec.cell_area * h;
}

}  // namespace gpoi
