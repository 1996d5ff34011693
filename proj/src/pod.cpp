#include "gpoi/pod.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include <json.hpp>

#include "gpoi/io.hpp"
#include "gpoi/kernels.hpp"
#include "gpoi/la.hpp"

namespace gpoi {

std::size_t ReducedBasis::rows() const {
    std::size_t r = 0;
    for (const auto& b : blocks) r += b.rows();
    return r;
}

std::size_t ReducedBasis::rank() const {
    std::size_t r = 0;
    for (const auto& b : blocks) r += b.cols();
    return r;
}

DenseMatrix ReducedBasis::materialize() const {
    DenseMatrix phi(rows(), rank());
    std::size_t roff = 0;
    std::size_t coff = 0;
    for (const auto& b : blocks) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::memcpy(phi.col(coff + j) + roff, b.col(j), b.rows() * sizeof(double));
        }
        roff += b.rows();
        coff += b.cols();
    }
    return phi;
}

DenseMatrix ReducedBasis::project_matrix(const DenseMatrix& x) const {
    if (x.rows() != rows()) throw DimensionError("project_matrix: row mismatch");
    DenseMatrix out(rank(), x.cols());
    std::size_t roff = 0;
    std::size_t coff = 0;
    for (const auto& b : blocks) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double* oj = out.col(j);
            const double* xj = x.col(j) + roff;
            for (std::size_t i = 0; i < b.cols(); ++i) {
                oj[coff + i] = kernels::dot(b.col(i), xj, b.rows());
            }
        }
        roff += b.rows();
        coff += b.cols();
    }
    return out;
}

DenseMatrix ReducedBasis::lift_matrix(const DenseMatrix& xr) const {
    if (xr.rows() != rank()) throw DimensionError("lift_matrix: row mismatch");
    DenseMatrix out(rows(), xr.cols());
    std::size_t roff = 0;
    std::size_t coff = 0;
    for (const auto& b : blocks) {
        for (std::size_t j = 0; j < xr.cols(); ++j) {
            double* oj = out.col(j) + roff;
            const double* xj = xr.col(j);
            for (std::size_t i = 0; i < b.cols(); ++i) {
                kernels::axpy(xj[coff + i], b.col(i), oj, b.rows());
            }
        }
        roff += b.rows();
        coff += b.cols();
    }
    return out;
}

Vector ReducedBasis::project(const Vector& x) const {
    if (x.size() != rows()) throw DimensionError("project: length mismatch");
    Vector out(rank(), 0.0);
    std::size_t roff = 0;
    std::size_t coff = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.cols(); ++i) {
            out[coff + i] = kernels::dot(b.col(i), x.data() + roff, b.rows());
        }
        roff += b.rows();
        coff += b.cols();
    }
    return out;
}

Vector ReducedBasis::lift(const Vector& xr) const {
    if (xr.size() != rank()) throw DimensionError("lift: length mismatch");
    Vector out(rows(), 0.0);
    std::size_t roff = 0;
    std::size_t coff = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.cols(); ++i) {
            kernels::axpy(xr[coff + i], b.col(i), out.data() + roff, b.rows());
        }
        roff += b.rows();
        coff += b.cols();
    }
    return out;
}

DenseMatrix ReducedBasis::congruence(const DenseMatrix& m) const {
    if (m.rows() != rows() || m.cols() != rows()) {
        throw DimensionError("congruence: shape mismatch");
    }
    const DenseMatrix phi = materialize();
    return multiply_at_b(phi, multiply(m, phi));
}

ReducedBasis ReducedBasis::truncated(std::size_t r) const {
    ReducedBasis out;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const DenseMatrix& b = blocks[bi];
        if (r > b.cols()) throw DimensionError("truncated: r exceeds block rank");
        DenseMatrix t(b.rows(), r);
        std::memcpy(t.data(), b.data(), b.rows() * r * sizeof(double));
        out.blocks.push_back(std::move(t));
        out.singular_values.push_back(singular_values[bi]);
    }
    return out;
}

namespace {

void apply_sign_convention(DenseMatrix& phi) {
    for (std::size_t j = 0; j < phi.cols(); ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < phi.rows(); ++i) {
            const double a = std::fabs(phi(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (phi(arg, j) < 0.0) kernels::scal(-1.0, phi.col(j), phi.rows());
    }
}

// Two passes of modified Gram-Schmidt; restores orthonormality lost to
// the squared conditioning of the Gram route.
void mgs_polish(DenseMatrix& phi) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < phi.cols(); ++j) {
            for (std::size_t i = 0; i < j; ++i) {
                const double proj = kernels::dot(phi.col(i), phi.col(j), phi.rows());
                kernels::axpy(-proj, phi.col(i), phi.col(j), phi.rows());
            }
            const double nrm = std::sqrt(kernels::sumsq(phi.col(j), phi.rows()));
            if (nrm == 0.0) throw NumericalError("pod_basis: basis column collapsed to zero");
            kernels::scal(1.0 / nrm, phi.col(j), phi.rows());
        }
    }
}

}  // namespace

ReducedBasis pod_basis(const DenseMatrix& y, std::size_t r) {
    const std::size_t kmax = std::min(y.rows(), y.cols());
    if (r < 1 || r > kmax) {
        throw DimensionError("pod_basis: r must lie in [1, " + std::to_string(kmax) +
                             "], got " + std::to_string(r));
    }

    ReducedBasis out;
    DenseMatrix phi;
    std::vector<double> sigma;

    if (y.cols() < y.rows()) {
        // method of snapshots on the thin (column) side
        const std::size_t m = y.cols();
        DenseMatrix gram = multiply_at_b(y, y);
        SymEig eig = sym_eig(gram);
        sigma.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            sigma[k] = std::sqrt(std::max(0.0, eig.values[m - 1 - k]));
        }
        const double lam_max = sigma.empty() ? 0.0 : sigma[0] * sigma[0];
        const double lam_floor =
            static_cast<double>(m) * std::numeric_limits<double>::epsilon() * lam_max;
        phi = DenseMatrix(y.rows(), r);
        for (std::size_t k = 0; k < r; ++k) {
            const double lam = sigma[k] * sigma[k];
            if (!(lam > lam_floor)) {
                throw DimensionError("pod_basis: requested r=" + std::to_string(r) +
                                     " exceeds the numerical rank " + std::to_string(k) +
                                     " of the snapshot matrix");
            }
            // phi_k = y w_k / sigma_k, eigenvalues ascend so w_k is column m-1-k
            gemv(Trans::No, 1.0 / sigma[k], y, eig.vectors.col(m - 1 - k), 0.0, phi.col(k));
        }
        mgs_polish(phi);
    } else {
        Svd s = svd(y, true, false);
        sigma = std::move(s.sigma);
        phi = DenseMatrix(y.rows(), r);
        std::memcpy(phi.data(), s.u.data(), y.rows() * r * sizeof(double));
    }

    apply_sign_convention(phi);
    out.blocks.push_back(std::move(phi));
    out.singular_values.push_back(std::move(sigma));
    return out;
}

ReducedBasis pod_basis_block2(const DenseMatrix& u, const DenseMatrix& v, std::size_t r1,
                              std::size_t r2) {
    if (u.rows() != v.rows()) throw DimensionError("pod_basis_block2: row count mismatch");
    ReducedBasis bu = pod_basis(u, r1);
    ReducedBasis bv = pod_basis(v, r2);
    ReducedBasis out;
    out.blocks = {std::move(bu.blocks[0]), std::move(bv.blocks[0])};
    out.singular_values = {std::move(bu.singular_values[0]), std::move(bv.singular_values[0])};
    return out;
}

ProjectedData project_set(const ReducedBasis& basis, const SnapshotSet& set) {
    if (set.y.rows() != basis.rows()) throw StructureError("project_set: dimension mismatch");
    ProjectedData out;
    out.y_r = basis.project_matrix(set.y);
    out.f_r = basis.project_matrix(set.f);
    out.ydot_r = basis.project_matrix(set.ydot);
    return out;
}

void save_basis(const std::string& base_path, const ReducedBasis& basis) {
    nlohmann::json meta;
    meta["blocks"] = nlohmann::json::array();
    for (std::size_t i = 0; i < basis.blocks.size(); ++i) {
        write_matrix(base_path + "_block" + std::to_string(i) + ".gpoi", basis.blocks[i]);
        meta["blocks"].push_back({{"rows", basis.blocks[i].rows()},
                                  {"cols", basis.blocks[i].cols()}});
    }
    meta["singular_values"] = basis.singular_values;
    write_text_file(base_path + ".json", meta.dump(2) + "\n");
}

ReducedBasis load_basis(const std::string& base_path) {
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_text_file(base_path + ".json"));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("load_basis: bad sidecar json: " + std::string(e.what()));
    }
    ReducedBasis out;
    const std::size_t nblocks = meta.at("blocks").size();
    for (std::size_t i = 0; i < nblocks; ++i) {
        out.blocks.push_back(read_matrix(base_path + "_block" + std::to_string(i) + ".gpoi"));
    }
    out.singular_values = meta.at("singular_values").get<std::vector<std::vector<double>>>();
    return out;
}

}  // namespace gpoi
