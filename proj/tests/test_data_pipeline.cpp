#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "gpoi/fom.hpp"
#include "gpoi/io.hpp"
#include "gpoi/snapshots.hpp"
#include "test_support.hpp"

using namespace gpoi;
namespace fs = std::filesystem;

TEST_CASE("derivative stencil is exact on constants, linears and quadratics") {
    const double dt = 0.05;
    const std::size_t cols = 9;

    DenseMatrix constant(3, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < 3; ++i) constant(i, j) = 4.2;
    }
    CHECK(max_abs(derivative_snapshots(constant, dt)) == 0.0);

    DenseMatrix linear(2, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        const double t = dt * static_cast<double>(j);
        linear(0, j) = t;
        linear(1, j) = 3.0 - 2.0 * t;
    }
    DenseMatrix dlin = derivative_snapshots(linear, dt);
    for (std::size_t j = 0; j < cols; ++j) {
        CHECK(dlin(0, j) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dlin(1, j) == doctest::Approx(-2.0).epsilon(1e-12));
    }

    // quadratic in time: all three stencils (forward, central, backward)
    // reproduce 2t exactly, which is the symbolic-expansion oracle
    DenseMatrix quad(1, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        const double t = dt * static_cast<double>(j);
        quad(0, j) = t * t;
    }
    DenseMatrix dquad = derivative_snapshots(quad, dt);
    for (std::size_t j = 0; j < cols; ++j) {
        const double t = dt * static_cast<double>(j);
        CHECK(std::fabs(dquad(0, j) - 2.0 * t) <= 1e-12);
    }

    DenseMatrix two(1, 2);
    CHECK_THROWS_AS(derivative_snapshots(two, dt), DimensionError);
}

TEST_CASE("collect_snapshots shapes and by-construction gradient columns") {
    FomSpec wave = wave_fom(200, 0.1, 10.0);
    SnapshotSet set = collect_snapshots(wave, TimeGrid{0.0, 1e-3, 50});
    CHECK(set.y.rows() == 400);
    CHECK(set.y.cols() == 51);
    CHECK(set.f.cols() == 51);
    CHECK(set.ydot.cols() == 51);

    // f columns equal eval_gradient on y columns with zero deviation
    double dev = 0.0;
    for (std::size_t j = 0; j < set.cols(); ++j) {
        Vector g = eval_gradient(wave, set.y.get_col(j));
        for (std::size_t i = 0; i < 400; ++i) {
            dev = std::max(dev, std::fabs(g[i] - set.f(i, j)));
        }
    }
    CHECK(dev == 0.0);

    // zero-step grid keeps a single column
    SnapshotSet single = collect_snapshots(wave, TimeGrid{0.0, 1e-3, 0});
    CHECK(single.y.cols() == 1);
    CHECK(single.f.cols() == 1);
    CHECK(single.ydot.cols() == 1);
}

TEST_CASE("stencil data converges at second order against the exact velocity") {
    FomSpec wave = wave_fom(200, 0.1, 10.0);
    auto max_dev = [&](double dt, std::size_t steps) {
        SnapshotSet set = collect_snapshots(wave, TimeGrid{0.0, dt, steps});
        double dev = 0.0;
        DenseMatrix rhs(set.y.rows(), set.cols());
        gemm(Trans::No, Trans::No, 1.0, wave.d, set.f, 0.0, rhs);
        for (std::size_t i = 0; i < set.y.rows() * set.cols(); ++i) {
            dev = std::max(dev, std::fabs(rhs.data()[i] - set.ydot.data()[i]));
        }
        return dev;
    };
    const double coarse = max_dev(1e-3, 100);
    const double fine = max_dev(5e-4, 200);
    const double ratio = coarse / fine;
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("concat_parametric stacks blocks and offsets") {
    FomSpec a = wave_fom(16, 0.1, 9.0);
    FomSpec b = wave_fom(16, 0.1, 11.0);
    SnapshotSet sa = collect_snapshots(a, TimeGrid{0.0, 1e-3, 10});
    SnapshotSet sb = collect_snapshots(b, TimeGrid{0.0, 1e-3, 20});

    SnapshotSet one = concat_parametric({sa});
    CHECK(one.cols() == 11);
    CHECK(max_abs_diff(one.y, sa.y) == 0.0);

    SnapshotSet both = concat_parametric({sa, sb});
    CHECK(both.cols() == 32);
    CHECK(both.offsets == std::vector<std::size_t>{0, 11});
    CHECK(both.mus == std::vector<double>{9.0, 11.0});
    for (std::size_t j = 0; j < 21; ++j) {
        for (std::size_t i = 0; i < 32; ++i) {
            CHECK(both.y(i, 11 + j) == sb.y(i, j));
        }
    }

    // 11 parameter samples: width 11 * (N + 1)
    std::vector<SnapshotSet> sets;
    for (int i = 0; i <= 10; ++i) {
        FomSpec spec = wave_fom(16, 0.1, 5.0 + static_cast<double>(i));
        sets.push_back(collect_snapshots(spec, TimeGrid{0.0, 1e-3, 5}));
    }
    SnapshotSet all = concat_parametric(sets);
    CHECK(all.cols() == 11 * 6);
    CHECK(all.offsets.size() == 11);

    SnapshotSet wrong = collect_snapshots(kdv_fom(16, -6, -1, 2.0), TimeGrid{0.0, 1e-3, 5});
    CHECK_THROWS_AS(concat_parametric({sa, wrong}), StructureError);
}

TEST_CASE("gpoi matrix file round-trips bit-exactly") {
    const std::string dir = (fs::temp_directory_path() / "gpoi_io_test").string();
    fs::create_directories(dir);
    Rng rng(51);
    DenseMatrix m = testsup::random_matrix(rng, 7, 3);
    const std::string path = dir + "/m.gpoi";
    write_matrix(path, m);
    DenseMatrix back = read_matrix(path);
    REQUIRE(back.rows() == 7);
    REQUIRE(back.cols() == 3);
    CHECK(std::memcmp(back.data(), m.data(), m.size() * sizeof(double)) == 0);

    // write twice -> identical bytes
    const std::string path2 = dir + "/m2.gpoi";
    write_matrix(path2, m);
    CHECK(read_text_file(path) == read_text_file(path2));
}

TEST_CASE("gpoi reader rejects malformed files before allocating") {
    const std::string dir = (fs::temp_directory_path() / "gpoi_io_test").string();
    fs::create_directories(dir);

    // truncated payload
    {
        DenseMatrix m(4, 4);
        write_matrix(dir + "/t.gpoi", m);
        std::string bytes = read_text_file(dir + "/t.gpoi");
        bytes.resize(bytes.size() - 9);
        std::ofstream out(dir + "/trunc.gpoi", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(read_matrix(dir + "/trunc.gpoi"), FormatError);

    // bad magic
    {
        std::ofstream out(dir + "/magic.gpoi", std::ios::binary);
        const char junk[24] = {'N', 'O', 'P', 'E'};
        out.write(junk, 24);
    }
    CHECK_THROWS_AS(read_matrix(dir + "/magic.gpoi"), FormatError);

    // absurd dimensions: 2^62 x 2^62 must be rejected by the overflow
    // guard, not by an allocation attempt
    {
        std::string bytes;
        bytes.append("GPOI", 4);
        const unsigned char ver[4] = {1, 0, 0, 0};
        bytes.append(reinterpret_cast<const char*>(ver), 4);
        unsigned char dim[8] = {0, 0, 0, 0, 0, 0, 0, 0x40};  // 2^62 little-endian
        bytes.append(reinterpret_cast<const char*>(dim), 8);
        bytes.append(reinterpret_cast<const char*>(dim), 8);
        std::ofstream out(dir + "/huge.gpoi", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(read_matrix(dir + "/huge.gpoi"), FormatError);

    // wrong version
    {
        DenseMatrix m(2, 2);
        write_matrix(dir + "/v.gpoi", m);
        std::string bytes = read_text_file(dir + "/v.gpoi");
        bytes[4] = 9;
        std::ofstream out(dir + "/v9.gpoi", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(read_matrix(dir + "/v9.gpoi"), FormatError);
}

TEST_CASE("csv writes 17-digit round-trip values") {
    const std::string dir = (fs::temp_directory_path() / "gpoi_io_test").string();
    fs::create_directories(dir);
    const std::string path = dir + "/t.csv";
    const double pi_ish = 3.14159265358979312;
    write_csv(path, {"a", "b"}, {{pi_ish, 1.0 / 3.0}, {std::nan(""), -2.5e-17}});
    CsvTable t = read_csv(path);
    REQUIRE(t.header.size() == 2);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == pi_ish);
    CHECK(t.rows[0][1] == 1.0 / 3.0);
    CHECK(std::isnan(t.rows[1][0]));
    CHECK(t.rows[1][1] == -2.5e-17);
}
