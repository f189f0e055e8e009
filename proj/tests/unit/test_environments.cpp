#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "akgp/environments.hpp"

using namespace akgp;
using namespace akgp::env;

namespace {

std::string error_of(const std::string& text) {
    std::istringstream in(text);
    try {
        (void)parse_raster(in, "t.txt");
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

RasterEnv small_raster() {
    RasterEnv r;
    r.values.resize(2, 3);
    r.values << 0.0, 1.0, 2.0,   // north row, y = 4
        10.0, 11.0, 12.0;        // south row, y = 0
    r.extent = {0.0, 2.0, 0.0, 4.0};
    r.obs_noise_std = 0.0;
    return r;
}

}  // namespace

TEST_CASE("raster parse errors name the offending row") {
    CHECK(error_of("").find("empty") != std::string::npos);
    CHECK(error_of("2 2 0 1 0\n1 2\n3 4\n").find("header") != std::string::npos);
    CHECK(error_of("3 2 0 1 0 1\n1 2\n3 4\n").find("row 3 of 3 is missing") != std::string::npos);
    CHECK(error_of("2 2 0 1 0 1\n1 2\n3 4 5\n").find("row 2 has 3 values, expected 2") != std::string::npos);
    CHECK(error_of("2 2 0 1 0 1\n1 x\n3 4\n").find("row 1") != std::string::npos);
    CHECK(error_of("2 2 0 1 0 1\n1 nan\n3 4\n").find("non-finite") != std::string::npos);
    CHECK(error_of("2 2 0 1 0 1\n1 2\n3 4\n5 6\n").find("trailing") != std::string::npos);
    CHECK(error_of("2 2 1 0 0 1\n1 2\n3 4\n").find("degenerate") != std::string::npos);
    CHECK(error_of("2 2 0 1 0 1\n\n1 2\n\n3 4\n").empty());
}

TEST_CASE("raster write/parse round trip is exact") {
    RasterEnv r = small_raster();
    r.values(0, 1) = 1.0 / 3.0;
    std::stringstream ss;
    write_raster(ss, r);
    const RasterEnv back = parse_raster(ss);
    CHECK(back.values == r.values);
    CHECK(back.extent.y_max == 4.0);
}

TEST_CASE("bilinear lookup is north-up") {
    const RasterEnv r = small_raster();
    Vector p(2);
    p << 0.0, 4.0;
    CHECK(query_truth(r, p) == 0.0);
    p << 0.0, 0.0;
    CHECK(query_truth(r, p) == 10.0);
    p << 2.0, 0.0;
    CHECK(query_truth(r, p) == 12.0);
    p << 0.5, 2.0;  // midway between rows, between columns 0 and 1
    CHECK(query_truth(r, p) == doctest::Approx(0.5 * (0.5 + 10.5)));
    p << -5.0, 10.0;  // clamped to the north-west corner
    CHECK(query_truth(r, p) == 0.0);
}

TEST_CASE("observe without noise equals truth") {
    const Environment e = small_raster();
    std::mt19937_64 rng(40);
    Matrix X(2, 2);
    X << 1.0, 1.0, 0.3, 3.3;
    CHECK(observe(e, X, rng) == truth(e, X));
}

TEST_CASE("observation noise has the configured scale") {
    RasterEnv r = small_raster();
    r.obs_noise_std = 2.0;
    const Environment e = r;
    std::mt19937_64 rng(41);
    const Matrix X = Matrix::Constant(20000, 2, 1.0);
    const Vector res = observe(e, X, rng) - truth(e, X);
    CHECK(std::abs(res.mean()) < 0.05);
    CHECK(std::sqrt(res.squaredNorm() / 20000.0) == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("five-partition function pieces") {
    const Synthetic1D f{Synthetic1DId::FivePartition, 0.0};
    CHECK(synth_eval(f, 0.1) == doctest::Approx(0.6 + 0.4 * std::sin(2 * std::numbers::pi * 0.25)));
    CHECK(synth_eval(f, 0.2) == doctest::Approx(-0.5 + 0.3));
    CHECK(synth_eval(f, 0.4125) == doctest::Approx(0.1 + 0.5));
    CHECK(synth_eval(f, 0.7) == doctest::Approx(1.0 - 0.15));
    CHECK(synth_eval(f, 1.0) == doctest::Approx(-0.3));
    CHECK_THROWS_AS(synth_eval(f, 1.5), DomainError);
    const Synthetic1D g{Synthetic1DId::XSin40X4, 0.0};
    CHECK(synth_eval(g, 0.5) == doctest::Approx(0.5 * std::sin(40.0 * 0.0625)));
    CHECK(parse_synthetic_id("xsin40x4") == Synthetic1DId::XSin40X4);
    CHECK(to_string(Synthetic1DId::FivePartition) == "five_partition");
    CHECK_THROWS(parse_synthetic_id("nope"));
}

TEST_CASE("synthetic rasters are seeded and nonstationary") {
    SyntheticRasterSpec spec;
    spec.rows = 60;
    spec.cols = 60;
    const RasterEnv a = make_synthetic_raster(spec);
    const RasterEnv b = make_synthetic_raster(spec);
    CHECK(a.values == b.values);
    spec.seed = 1;
    CHECK(make_synthetic_raster(spec).values != a.values);

    // The rocky east varies much faster than the flat west.
    auto roughness = [&](int c0, int c1) {
        double s = 0.0;
        for (int r = 0; r < 60; ++r)
            for (int c = c0; c < c1 - 1; ++c) s += std::abs(a.values(r, c + 1) - a.values(r, c));
        return s;
    };
    CHECK(roughness(45, 60) > 5.0 * roughness(0, 15));

    CHECK(terrain_region(a.extent, 10.0) == TerrainRegion::Flat);
    CHECK(terrain_region(a.extent, 50.0) == TerrainRegion::Hills);
    CHECK(terrain_region(a.extent, 90.0) == TerrainRegion::Rocky);

    spec.generator = "stationary";
    CHECK(make_synthetic_raster(spec).values.allFinite());
    spec.generator = "bogus";
    CHECK_THROWS(make_synthetic_raster(spec));
}

TEST_CASE("bounds of the environment variants") {
    const Environment one = Synthetic1D{};
    CHECK(bounds(one).dim() == 1);
    CHECK(bounds(one).upper(0) == 1.0);
    const Environment two = small_raster();
    CHECK(bounds(two).upper(1) == 4.0);
}
