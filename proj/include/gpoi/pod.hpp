#pragma once

#include <string>
#include <vector>

#include "gpoi/snapshots.hpp"

namespace gpoi {

// Orthonormal POD basis. One block for a monolithic basis; two stacked
// diagonal blocks for the [u; v] form used by second-order systems.
struct ReducedBasis {
    std::vector<DenseMatrix> blocks;
    std::vector<std::vector<double>> singular_values;  // full spectra, descending, per block

    bool is_block2() const { return blocks.size() == 2; }
    std::size_t rows() const;
    std::size_t rank() const;

    DenseMatrix materialize() const;  // full block-diagonal basis matrix

    DenseMatrix project_matrix(const DenseMatrix& x) const;  // phi^T x
    DenseMatrix lift_matrix(const DenseMatrix& xr) const;    // phi xr
    Vector project(const Vector& x) const;
    Vector lift(const Vector& xr) const;
    DenseMatrix congruence(const DenseMatrix& m) const;  // phi^T m phi

    // Leading r columns of every block (nested truncation).
    ReducedBasis truncated(std::size_t r) const;
};

// Leading r left singular vectors of y. Uses the Gram matrix
// (method of snapshots) when cols < rows, direct bidiagonalization
// otherwise. Column signs follow a fixed convention: the entry of largest
// magnitude in each column is made positive.
ReducedBasis pod_basis(const DenseMatrix& y, std::size_t r);

// Block-diagonal basis from separate u and v snapshot matrices.
ReducedBasis pod_basis_block2(const DenseMatrix& u, const DenseMatrix& v, std::size_t r1,
                              std::size_t r2);

struct ProjectedData {
    DenseMatrix y_r;
    DenseMatrix f_r;
    DenseMatrix ydot_r;
};

ProjectedData project_set(const ReducedBasis& basis, const SnapshotSet& set);

// Persistence: <base>_block<k>.gpoi per block plus a <base>.json sidecar
// holding block sizes and singular values.
void save_basis(const std::string& base_path, const ReducedBasis& basis);
ReducedBasis load_basis(const std::string& base_path);

}  // namespace gpoi
