#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "gpoi/fom.hpp"
#include "gpoi/pod.hpp"
#include "test_support.hpp"

using namespace gpoi;

namespace {

double projection_residual_sq(const DenseMatrix& y, const ReducedBasis& basis) {
    DenseMatrix lifted = basis.lift_matrix(basis.project_matrix(y));
    return std::pow(frobenius_norm(subtract(y, lifted)), 2);
}

}  // namespace

TEST_CASE("pod orders columns by singular value with fixed signs") {
    DenseMatrix y(3, 2);
    y(0, 0) = 1.0;   // e1 column, norm 1
    y(1, 1) = 2.0;   // 2 e2 column
    ReducedBasis basis = pod_basis(y, 2);
    // dominant direction first
    CHECK(basis.blocks[0](1, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(basis.blocks[0](0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(basis.singular_values[0][0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(basis.singular_values[0][1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rank-1 snapshots are reproduced exactly by r=1") {
    Rng rng(61);
    Vector u = testsup::random_vector(rng, 12);
    DenseMatrix y(12, 5);
    for (std::size_t j = 0; j < 5; ++j) {
        for (std::size_t i = 0; i < 12; ++i) y(i, j) = u[i] * (1.0 + static_cast<double>(j));
    }
    ReducedBasis basis = pod_basis(y, 1);
    CHECK(projection_residual_sq(y, basis) <= 1e-20 * std::pow(frobenius_norm(y), 2));
}

TEST_CASE("full-rank reconstruction through the gram route") {
    Rng rng(62);
    DenseMatrix y = testsup::random_matrix(rng, 50, 30);  // cols < rows: method of snapshots
    ReducedBasis basis = pod_basis(y, 30);
    CHECK(std::sqrt(projection_residual_sq(y, basis)) <= 1e-10);

    DenseMatrix phi = basis.materialize();
    DenseMatrix ortho = multiply_at_b(phi, phi);
    add_scaled_identity(ortho, -1.0);
    CHECK(max_abs(ortho) <= 1e-12);
}

TEST_CASE("pod r range and rank guards") {
    Rng rng(63);
    DenseMatrix y = testsup::random_matrix(rng, 10, 4);
    CHECK_THROWS_AS(pod_basis(y, 0), DimensionError);
    CHECK_THROWS_AS(pod_basis(y, 5), DimensionError);

    // exactly repeated column: numerical rank 1 on the gram route
    DenseMatrix dup(10, 2);
    for (std::size_t i = 0; i < 10; ++i) dup(i, 0) = dup(i, 1) = rng.symmetric();
    CHECK_THROWS_AS(pod_basis(dup, 2), DimensionError);
}

TEST_CASE("gram and bidiagonalization routes agree on well-separated spectra") {
    Rng rng(64);
    DenseMatrix wide = testsup::random_matrix(rng, 9, 40);   // direct route
    DenseMatrix tall = transpose(wide);                      // gram route (cols < rows)
    ReducedBasis bw = pod_basis(wide, 5);
    ReducedBasis bt = pod_basis(tall, 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(bw.singular_values[0][k] ==
              doctest::Approx(bt.singular_values[0][k]).epsilon(1e-10));
    }
    // projectors onto the leading subspaces of wide and tall^T coincide
    DenseMatrix pu = multiply_a_bt(bw.blocks[0], bw.blocks[0]);
    // left vectors of tall are the right singular vectors of wide; instead
    // compare projection residuals, which are basis-invariant
    const double rw = projection_residual_sq(wide, bw);
    DenseMatrix wide_again = transpose(tall);
    const double tail = [&] {
        double t = 0.0;
        for (std::size_t k = 5; k < 9; ++k) {
            t += bw.singular_values[0][k] * bw.singular_values[0][k];
        }
        return t;
    }();
    CHECK(rw == doctest::Approx(tail).epsilon(1e-8));
    (void)pu;
    (void)wide_again;
}

TEST_CASE("block2 basis is block-orthonormal and splits the projection error") {
    Rng rng(65);
    DenseMatrix u = testsup::random_matrix(rng, 20, 12);
    DenseMatrix v = testsup::random_matrix(rng, 20, 12);

    ReducedBasis block = pod_basis_block2(u, v, 4, 4);
    CHECK(block.is_block2());
    CHECK(block.rows() == 40);
    CHECK(block.rank() == 8);

    DenseMatrix phi = block.materialize();
    DenseMatrix ortho = multiply_at_b(phi, phi);
    add_scaled_identity(ortho, -1.0);
    CHECK(max_abs(ortho) <= 1e-12);

    // r1 = r2 = 1 on identical inputs: both blocks equal
    ReducedBasis same = pod_basis_block2(u, u, 1, 1);
    CHECK(max_abs_diff(same.blocks[0], same.blocks[1]) == 0.0);

    // block projection error equals the sum of the per-block errors
    DenseMatrix stacked(40, 12);
    for (std::size_t j = 0; j < 12; ++j) {
        for (std::size_t i = 0; i < 20; ++i) {
            stacked(i, j) = u(i, j);
            stacked(20 + i, j) = v(i, j);
        }
    }
    const double whole = projection_residual_sq(stacked, block);
    const double part_u = projection_residual_sq(u, pod_basis(u, 4));
    const double part_v = projection_residual_sq(v, pod_basis(v, 4));
    CHECK(whole == doctest::Approx(part_u + part_v).epsilon(1e-10));
}

TEST_CASE("project_set identities") {
    FomSpec wave = wave_fom(32, 0.1, 10.0);
    SnapshotSet set = collect_snapshots(wave, TimeGrid{0.0, 1e-2, 300});

    // identity basis: r = n projection is exact
    ReducedBasis eye;
    eye.blocks.push_back(DenseMatrix::identity(64));
    eye.singular_values.push_back(std::vector<double>(64, 1.0));
    ProjectedData p = project_set(eye, set);
    CHECK(max_abs_diff(p.y_r, set.y) == 0.0);

    ReducedBasis basis = pod_basis_block2(
        [&] {
            DenseMatrix u(32, set.cols());
            for (std::size_t j = 0; j < set.cols(); ++j) {
                for (std::size_t i = 0; i < 32; ++i) u(i, j) = set.y(i, j);
            }
            return u;
        }(),
        [&] {
            DenseMatrix v(32, set.cols());
            for (std::size_t j = 0; j < set.cols(); ++j) {
                for (std::size_t i = 0; i < 32; ++i) v(i, j) = set.y(32 + i, j);
            }
            return v;
        }(),
        3, 3);
    ProjectedData pr = project_set(basis, set);
    CHECK(pr.y_r.rows() == 6);

    // projecting a lifted matrix is the identity on reduced coordinates
    DenseMatrix again = basis.project_matrix(basis.lift_matrix(pr.y_r));
    CHECK(max_abs_diff(again, pr.y_r) <= 1e-13 * std::max(1.0, max_abs(pr.y_r)));

    // orthogonal projection is a contraction in the Frobenius norm
    CHECK(frobenius_norm(pr.y_r) <= frobenius_norm(set.y) * (1.0 + 1e-13));
}

TEST_CASE("projection error equals the singular value tail") {
    Rng rng(66);
    DenseMatrix y = testsup::random_matrix(rng, 14, 40);
    ReducedBasis basis = pod_basis(y, 6);
    const double resid = projection_residual_sq(y, basis);
    double tail = 0.0;
    const auto& sv = basis.singular_values[0];
    for (std::size_t k = 6; k < sv.size(); ++k) tail += sv[k] * sv[k];
    CHECK(resid == doctest::Approx(tail).epsilon(1e-8));
}

TEST_CASE("basis is deterministic and sign-fixed") {
    Rng rng(67);
    DenseMatrix y = testsup::random_matrix(rng, 10, 30);
    ReducedBasis a = pod_basis(y, 4);
    ReducedBasis b = pod_basis(y, 4);
    CHECK(max_abs_diff(a.blocks[0], b.blocks[0]) == 0.0);
    for (std::size_t j = 0; j < 4; ++j) {
        double best = 0.0;
        for (std::size_t i = 0; i < 10; ++i) {
            if (std::fabs(a.blocks[0](i, j)) > std::fabs(best)) best = a.blocks[0](i, j);
        }
        CHECK(best > 0.0);
    }
}

TEST_CASE("truncated bases are nested") {
    Rng rng(68);
    DenseMatrix y = testsup::random_matrix(rng, 12, 40);
    ReducedBasis full = pod_basis(y, 8);
    ReducedBasis small = full.truncated(3);
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < 12; ++i) {
            CHECK(small.blocks[0](i, j) == full.blocks[0](i, j));
        }
    }
}

TEST_CASE("basis persistence round trip") {
    namespace fs = std::filesystem;
    const std::string dir = (fs::temp_directory_path() / "gpoi_pod_test").string();
    fs::create_directories(dir);
    Rng rng(69);
    ReducedBasis basis = pod_basis_block2(testsup::random_matrix(rng, 9, 20),
                                          testsup::random_matrix(rng, 9, 20), 3, 2);
    save_basis(dir + "/basis", basis);
    ReducedBasis back = load_basis(dir + "/basis");
    REQUIRE(back.blocks.size() == 2);
    CHECK(max_abs_diff(back.blocks[0], basis.blocks[0]) == 0.0);
    CHECK(max_abs_diff(back.blocks[1], basis.blocks[1]) == 0.0);
    CHECK(back.singular_values == basis.singular_values);
}
