#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gpoi/la.hpp"
#include "test_support.hpp"

using namespace gpoi;

TEST_CASE("periodic_laplacian stencil") {
    DenseMatrix l3 = periodic_laplacian(3);
    const double expected[3][3] = {{-2, 1, 1}, {1, -2, 1}, {1, 1, -2}};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(l3(i, j) == expected[i][j]);
    }

    DenseMatrix l8 = periodic_laplacian(8);
    for (std::size_t i = 0; i < 8; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < 8; ++j) row += l8(i, j);
        CHECK(row == 0.0);
    }

    DenseMatrix l5 = periodic_laplacian(5);
    CHECK(max_abs_diff(l5, transpose(l5)) == 0.0);

    CHECK_THROWS_AS(periodic_laplacian(2), DimensionError);
}

TEST_CASE("periodic_central_diff stencil") {
    DenseMatrix s3 = periodic_central_diff(3);
    const double expected[3][3] = {{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(s3(i, j) == expected[i][j]);
    }

    DenseMatrix s6 = periodic_central_diff(6);
    CHECK(skew_defect(s6) == 0.0);

    DenseMatrix s7 = periodic_central_diff(7);
    for (std::size_t i = 0; i < 7; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < 7; ++j) row += s7(i, j);
        CHECK(row == 0.0);
    }

    CHECK_THROWS_AS(periodic_central_diff(1), DimensionError);
}

TEST_CASE("skew_defect") {
    Rng rng(3);
    DenseMatrix s = testsup::random_skew(rng, 6);
    CHECK(skew_defect(s) == 0.0);

    DenseMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    CHECK(skew_defect(m) == 2.0);

    DenseMatrix rect(2, 3);
    CHECK_THROWS_AS(skew_defect(rect), DimensionError);
}

TEST_CASE("sym_eig basics") {
    SymEig id = sym_eig(DenseMatrix::identity(3));
    for (double v : id.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    DenseMatrix d(2, 2);
    d(0, 0) = -1.0;
    d(1, 1) = 2.0;
    SymEig de = sym_eig(d);
    CHECK(de.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(de.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::fabs(de.vectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::fabs(de.vectors(1, 1)) == doctest::Approx(1.0).epsilon(1e-13));

    DenseMatrix rect(2, 3);
    CHECK_THROWS_AS(sym_eig(rect), StructureError);
    DenseMatrix asym(2, 2);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(sym_eig(asym), StructureError);
}

TEST_CASE("sym_eig matches the characteristic-polynomial root oracle") {
    Rng rng(41);
    DenseMatrix m = testsup::random_symmetric(rng, 5);
    std::vector<double> roots = testsup::eig_roots_oracle(m);
    REQUIRE(roots.size() == 5);
    std::sort(roots.begin(), roots.end());

    SymEig e = sym_eig(m);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::fabs(e.values[i] - roots[i]) <= 1e-10);
    }
}

TEST_CASE("sym_eig reconstruction and orthonormality invariants") {
    Rng rng(42);
    for (std::size_t n : {std::size_t{2}, std::size_t{7}, std::size_t{24}}) {
        DenseMatrix m = testsup::random_symmetric(rng, n);
        SymEig e = sym_eig(m);

        // ascending order
        for (std::size_t i = 1; i < n; ++i) CHECK(e.values[i - 1] <= e.values[i]);

        // v diag(lambda) v^T reconstructs m
        DenseMatrix vd = e.vectors;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) vd(i, j) *= e.values[j];
        }
        DenseMatrix rec = multiply_a_bt(vd, e.vectors);
        CHECK(frobenius_norm(subtract(rec, m)) <= 1e-10 * std::max(1.0, frobenius_norm(m)));

        // orthonormal columns
        DenseMatrix vtv = multiply_at_b(e.vectors, e.vectors);
        add_scaled_identity(vtv, -1.0);
        CHECK(max_abs(vtv) <= 1e-12);
    }
}

TEST_CASE("lu solves and detects singularity") {
    Rng rng(7);
    DenseMatrix a = testsup::random_matrix(rng, 9, 9);
    Vector b = testsup::random_vector(rng, 9);
    LuFactors f = lu_factor(a);
    Vector x = lu_solve(f, b);
    Vector ax(9, 0.0);
    gemv(Trans::No, 1.0, a, x.data(), 0.0, ax.data());
    for (std::size_t i = 0; i < 9; ++i) CHECK(ax[i] == doctest::Approx(b[i]).epsilon(1e-10));

    DenseMatrix sing(3, 3);
    sing(0, 0) = 1.0;
    sing(1, 1) = 1.0;  // third row/column zero
    CHECK_THROWS_AS(lu_factor(sing), NumericalError);
}

TEST_CASE("cholesky factors spd and rejects indefinite") {
    Rng rng(15);
    DenseMatrix g = testsup::random_psd(rng, 6, 0.5);
    auto l = try_cholesky(g);
    REQUIRE(l.has_value());
    DenseMatrix rec = multiply_a_bt(*l, *l);
    CHECK(frobenius_norm(subtract(rec, g)) <= 1e-12 * frobenius_norm(g));

    DenseMatrix indef = DenseMatrix::identity(3);
    indef(2, 2) = -1.0;
    CHECK_FALSE(try_cholesky(indef).has_value());
}

TEST_CASE("lyapunov solver closed-form cases") {
    // g = identity: 2 x = q
    DenseMatrix q(2, 2);
    q(0, 1) = -1.0;
    q(1, 0) = 1.0;
    LyapunovSolution s = solve_sym_lyapunov(DenseMatrix::identity(2), q);
    CHECK(max_abs_diff(s.x, scaled(q, 0.5)) <= 1e-15);
    CHECK(s.deflated == 0);

    // q = 0 -> x = 0
    Rng rng(8);
    DenseMatrix g = testsup::random_psd(rng, 4, 0.1);
    LyapunovSolution z = solve_sym_lyapunov(g, DenseMatrix(4, 4));
    CHECK(max_abs(z.x) == 0.0);
    CHECK(z.residual == 0.0);

    // g = diag(1,2), q = [[0,3],[-3,0]] -> x = [[0,1],[-1,0]]
    DenseMatrix g2(2, 2);
    g2(0, 0) = 1.0;
    g2(1, 1) = 2.0;
    DenseMatrix q2(2, 2);
    q2(0, 1) = 3.0;
    q2(1, 0) = -3.0;
    LyapunovSolution s2 = solve_sym_lyapunov(g2, q2);
    DenseMatrix expect(2, 2);
    expect(0, 1) = 1.0;
    expect(1, 0) = -1.0;
    CHECK(max_abs_diff(s2.x, expect) <= 1e-14);
    // and the independent Kronecker oracle agrees
    CHECK(max_abs_diff(s2.x, testsup::lyapunov_oracle(g2, q2)) <= 1e-12);
}

TEST_CASE("lyapunov solver matches the Kronecker oracle on random pairs") {
    Rng rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + rng.next_u64() % 7;  // up to 8
        DenseMatrix g = testsup::random_psd(rng, n, 0.2);
        DenseMatrix q = testsup::random_skew(rng, n);
        LyapunovSolution s = solve_sym_lyapunov(g, q);
        DenseMatrix oracle = testsup::lyapunov_oracle(g, q);
        CHECK(frobenius_norm(subtract(s.x, oracle)) <=
              1e-9 * std::max(1.0, frobenius_norm(oracle)));
        CHECK(s.deflated == 0);
        CHECK(s.residual <= 1e-9);
        // skew q with no deflation -> skew x
        CHECK(skew_defect(s.x) <= 1e-12 * std::max(1.0, max_abs(s.x)));
    }
}

TEST_CASE("lyapunov deflation is counted, not silent") {
    DenseMatrix g(2, 2);
    g(0, 0) = 1.0;  // second eigenvalue 0
    DenseMatrix q(2, 2);
    q(0, 1) = 1.0;
    q(1, 0) = -1.0;
    LyapunovSolution s = solve_sym_lyapunov(g, q);
    CHECK(s.deflated == 1);  // the (lambda=0, lambda=0) entry
    // remaining entries still solve the equation where defined
    CHECK(skew_defect(s.x) <= 1e-14);

    DenseMatrix g3(3, 3);
    CHECK_THROWS_AS(solve_sym_lyapunov(g3, q), DimensionError);
    DenseMatrix notskew = DenseMatrix::identity(2);
    CHECK_THROWS_AS(solve_sym_lyapunov(g, notskew), StructureError);
}

TEST_CASE("svd reconstructs and is orthonormal") {
    Rng rng(55);
    for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{9, 6}, {6, 9}, {8, 8}}) {
        DenseMatrix a = testsup::random_matrix(rng, rows, cols);
        Svd s = svd(a, true, true);
        const std::size_t k = std::min(rows, cols);
        REQUIRE(s.sigma.size() == k);
        for (std::size_t i = 1; i < k; ++i) CHECK(s.sigma[i - 1] >= s.sigma[i]);
        for (double sv : s.sigma) CHECK(sv >= 0.0);

        DenseMatrix us = s.u;
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < rows; ++i) us(i, j) *= s.sigma[j];
        }
        DenseMatrix rec = multiply_a_bt(us, s.v);
        CHECK(frobenius_norm(subtract(rec, a)) <= 1e-12 * std::max(1.0, frobenius_norm(a)));

        DenseMatrix utu = multiply_at_b(s.u, s.u);
        add_scaled_identity(utu, -1.0);
        CHECK(max_abs(utu) <= 1e-12);
        DenseMatrix vtv = multiply_at_b(s.v, s.v);
        add_scaled_identity(vtv, -1.0);
        CHECK(max_abs(vtv) <= 1e-12);
    }
}

TEST_CASE("svd singular values agree with the gram-eigenvalue route") {
    Rng rng(56);
    DenseMatrix a = testsup::random_matrix(rng, 12, 7);
    Svd s = svd(a, false, false);
    DenseMatrix gram = multiply_at_b(a, a);
    SymEig e = sym_eig(gram);
    for (std::size_t i = 0; i < 7; ++i) {
        const double from_gram = std::sqrt(std::max(0.0, e.values[6 - i]));
        CHECK(s.sigma[i] == doctest::Approx(from_gram).epsilon(1e-10));
    }
}

TEST_CASE("svd handles degenerate inputs") {
    DenseMatrix zero(5, 3);
    Svd s = svd(zero, true, false);
    for (double sv : s.sigma) CHECK(sv == 0.0);

    // rank-1
    Rng rng(57);
    Vector u = testsup::random_vector(rng, 6);
    Vector v = testsup::random_vector(rng, 4);
    DenseMatrix r1(6, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t i = 0; i < 6; ++i) r1(i, j) = u[i] * v[j];
    }
    Svd s1 = svd(r1, true, false);
    CHECK(s1.sigma[0] == doctest::Approx(norm2(u) * norm2(v)).epsilon(1e-12));
    for (std::size_t i = 1; i < 4; ++i) CHECK(s1.sigma[i] <= 1e-13 * s1.sigma[0]);
}
