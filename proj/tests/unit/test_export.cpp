#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "akgp/export.hpp"
#include "akgp/plot.hpp"

using namespace akgp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("akgp_export_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

harness::ExperimentResult fake_result() {
    harness::ExperimentResult r{"tile", "ak", "random", {}};
    for (std::uint64_t seed : {4u, 9u}) {
        harness::SeedRun run;
        run.seed = seed;
        for (int i = 0; i < 3; ++i) {
            metrics::MetricsRecord m;
            m.num_samples = 50 + i;
            m.smse = 0.1 * (i + 1) + 0.01 * static_cast<double>(seed);
            m.msll = -1.0 / 3.0 * (i + 1) - 0.1 * static_cast<double>(seed);
            m.nlpd = 1e-17 * i;
            m.rmse = 2.5;
            m.mae = 1.0 + i;
            m.wall_time_s = 0.001 * i;
            run.curve.push_back(m);
        }
        r.runs.push_back(run);
    }
    return r;
}

}  // namespace

TEST_CASE("empty results give a header-only CSV") {
    const fs::path dir = scratch("empty");
    const fs::path p = io::write_experiment_csv(dir, harness::ExperimentResult{"e", "rbf", "random", {}});
    CHECK(p.filename() == "e__rbf__random.csv");
    CHECK(slurp(p) == std::string(io::kMetricsHeader) + "\n");
    CHECK(io::read_metrics_csv(p).empty());
}

TEST_CASE("metrics CSV round trips exactly") {
    const fs::path dir = scratch("roundtrip");
    const auto r = fake_result();
    const auto rows = io::read_metrics_csv(io::write_experiment_csv(dir, r));
    REQUIRE(rows.size() == 6);
    std::size_t k = 0;
    for (const auto& run : r.runs) {
        for (const auto& m : run.curve) {
            CHECK(rows[k].seed == run.seed);
            CHECK(rows[k].record.num_samples == m.num_samples);
            CHECK(rows[k].record.smse == m.smse);
            CHECK(rows[k].record.msll == m.msll);
            CHECK(rows[k].record.nlpd == m.nlpd);
            CHECK(rows[k].record.mae == m.mae);
            ++k;
        }
    }
}

TEST_CASE("failed seeds are left out of the curves") {
    const fs::path dir = scratch("failed");
    auto r = fake_result();
    r.runs[1].ok = false;
    CHECK(io::read_metrics_csv(io::write_experiment_csv(dir, r)).size() == 3);
}

TEST_CASE("summary statistics match a hand aggregation") {
    const fs::path dir = scratch("summary");
    const auto r = fake_result();
    const io::CsvTable t = io::read_csv(io::write_summary_csv(dir, {r}));
    REQUIRE(t.rows.size() == 1);
    // Per-seed curve averages of msll: seed 4 -> -2/3 - 0.4, seed 9 -> -2/3 - 0.9.
    const double a = -2.0 / 3.0 - 0.4, b = -2.0 / 3.0 - 0.9;
    CHECK(parse_double(t.rows[0][t.column("msll_mean")]) == doctest::Approx((a + b) / 2.0).epsilon(1e-14));
    CHECK(parse_double(t.rows[0][t.column("msll_std")]) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(t.rows[0][t.column("num_failed")] == "0");
}

TEST_CASE("csv reader reports malformed rows") {
    const fs::path dir = scratch("malformed");
    {
        std::ofstream out(dir / "bad.csv");
        out << io::kMetricsHeader << "\n0,50,1,2\n";
    }
    CHECK_THROWS_AS(io::read_metrics_csv(dir / "bad.csv"), ParseError);
    {
        std::ofstream out(dir / "header.csv");
        out << "a,b\n1,2\n";
    }
    CHECK_THROWS_AS(io::read_metrics_csv(dir / "header.csv"), ParseError);
}

TEST_CASE("maps and plots are written") {
    const fs::path dir = scratch("plots");
    auto r = fake_result();
    harness::PredictionMaps m;
    m.locations.resize(6, 2);
    m.locations << 0, 0, 1, 0, 2, 0, 0, 1, 1, 1, 2, 1;
    m.truth = Vector::LinSpaced(6, 0, 5);
    m.mean = m.truth;
    m.stddev = Vector::Ones(6);
    m.weights = Matrix::Constant(6, 2, std::sqrt(0.5));
    m.memberships = m.weights;
    m.lengthscales = Vector::LinSpaced(2, 0.1, 0.5);
    m.samples = m.locations.topRows(2);
    r.runs[0].maps = m;
    const auto maps = io::write_maps_csv(dir, r);
    REQUIRE(maps.size() == 1);
    const io::CsvTable t = io::read_csv(maps[0]);
    CHECK(t.header.size() == 2 + 3 + 2 + 2);
    CHECK(t.rows.size() == 6);
    io::write_experiment_csv(dir, r);

    const auto written = plot::plot_directory(dir);
    CHECK(fs::exists(dir / "plots" / "tile__ak__random__msll.svg"));
    CHECK(fs::exists(dir / "plots" / "tile__ak__random__maps_seed4__mean.ppm"));
    CHECK(written.size() == 2 + 4);
    const std::string ppm = slurp(dir / "plots" / "tile__ak__random__maps_seed4__truth.ppm");
    CHECK(ppm.rfind("P6\n3 2\n255\n", 0) == 0);
}

TEST_CASE("directory summary covers every experiment file") {
    const fs::path dir = scratch("dirsummary");
    auto a = fake_result();
    auto b = fake_result();
    b.kernel = "rbf";
    io::write_experiment_csv(dir, a);
    io::write_experiment_csv(dir, b);
    io::write_summary_csv(dir, {a}, "expected.csv");
    const io::CsvTable t = io::read_csv(io::summarize_directory(dir));
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][t.column("kernel")] == "ak");
    CHECK(t.rows[1][t.column("kernel")] == "rbf");
    const io::CsvTable expected = io::read_csv(dir / "expected.csv");
    CHECK(t.rows[0] == expected.rows[0]);
}
