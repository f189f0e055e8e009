#include <doctest.h>

#include <filesystem>

#include "akgp/harness.hpp"
#include "akgp/suites.hpp"

using namespace akgp;

namespace {

ExperimentConfig small_1d() {
    ExperimentConfig c;
    c.env = "1d:five_partition";
    c.obs_noise_std = 0.05;
    c.kernel = "ak";
    c.num_lengthscales = 4;
    c.hidden_dim = 5;
    c.n_init = 20;
    c.n_max = 30;
    c.init_iters = 10;
    c.seeds = {0, 1};
    c.test_grid_1d = 40;
    c.num_candidates = 50;
    return c;
}

ExperimentConfig small_raster() {
    ExperimentConfig c;
    c.env = "synthetic:nonstationary";
    c.raster_rows = 30;
    c.raster_cols = 30;
    c.kernel = "rbf";
    c.n_init = 20;
    c.n_max = 40;
    c.init_iters = 10;
    c.seeds = {3};
    c.test_grid = 10;
    c.num_candidates = 50;
    return c;
}

}  // namespace

TEST_CASE("a budget equal to the initial samples yields one record") {
    ExperimentConfig c = small_1d();
    c.n_max = c.n_init;
    const auto r = harness::run_experiment(c);
    REQUIRE(r.all_ok());
    for (const auto& run : r.runs) {
        REQUIRE(run.curve.size() == 1);
        CHECK(run.curve[0].num_samples == 20);
    }
}

TEST_CASE("random and active sampling add one sample per epoch") {
    for (const char* strategy : {"random", "active"}) {
        CAPTURE(strategy);
        ExperimentConfig c = small_1d();
        c.strategy = strategy;
        const auto r = harness::run_experiment(c);
        REQUIRE(r.all_ok());
        const auto& run = r.runs[0];
        CHECK(run.curve.size() == 11);
        CHECK(run.curve.back().num_samples == 30);
        REQUIRE(run.optimizer_iters.size() == 11);
        CHECK(run.optimizer_iters[0] == 10);
        for (std::size_t i = 1; i < run.optimizer_iters.size(); ++i) CHECK(run.optimizer_iters[i] == 1);
    }
}

TEST_CASE("myopic sampling follows the training rule and budget bookkeeping") {
    ExperimentConfig c = small_raster();
    c.strategy = "myopic";
    c.kernel = "ak";
    c.num_lengthscales = 3;
    c.hidden_dim = 4;
    const auto r = harness::run_experiment(c);
    REQUIRE(r.all_ok());
    const auto& run = r.runs[0];
    long added = 0, biggest = 0;
    for (std::size_t i = 1; i < run.optimizer_iters.size(); ++i) {
        added += run.optimizer_iters[i];
        biggest = std::max(biggest, run.optimizer_iters[i]);
    }
    const long final_n = run.curve.back().num_samples;
    CHECK(final_n == c.n_init + added);
    CHECK(final_n >= c.n_max);
    CHECK(final_n - c.n_max < biggest);
    for (std::size_t i = 1; i < run.curve.size(); ++i) CHECK(run.curve[i].num_samples > run.curve[i - 1].num_samples);
}

TEST_CASE("eval_every thins the curve but keeps the final record") {
    ExperimentConfig c = small_1d();
    c.eval_every = 4;
    c.seeds = {0};
    const auto r = harness::run_experiment(c);
    REQUIRE(r.all_ok());
    std::vector<long> counts;
    for (const auto& rec : r.runs[0].curve) counts.push_back(rec.num_samples);
    CHECK(counts == std::vector<long>{20, 24, 28, 30});
}

TEST_CASE("identical config and seed give identical curves") {
    ExperimentConfig c = small_1d();
    c.strategy = "active";
    const auto a = harness::run_experiment(c);
    const auto b = harness::run_experiment(c);
    REQUIRE(a.runs.size() == b.runs.size());
    for (std::size_t s = 0; s < a.runs.size(); ++s) {
        REQUIRE(a.runs[s].curve.size() == b.runs[s].curve.size());
        for (std::size_t i = 0; i < a.runs[s].curve.size(); ++i) {
            CHECK(a.runs[s].curve[i].msll == b.runs[s].curve[i].msll);
            CHECK(a.runs[s].curve[i].smse == b.runs[s].curve[i].smse);
        }
    }
    CHECK(a.runs[0].curve.back().msll != a.runs[1].curve.back().msll);
}

TEST_CASE("parallel seeds match sequential seeds") {
    ExperimentConfig c = small_1d();
    const auto seq = harness::run_experiment(c);
    c.jobs = 2;
    const auto par = harness::run_experiment(c);
    for (std::size_t s = 0; s < seq.runs.size(); ++s) {
        CHECK(seq.runs[s].seed == par.runs[s].seed);
        CHECK(seq.runs[s].curve.back().msll == par.runs[s].curve.back().msll);
    }
}

TEST_CASE("normalizer maps the extent to the unit box and standardizes targets") {
    Bounds b{Vector::Zero(2), Vector::Constant(2, 100.0)};
    Vector y(5);
    y << 3.0, 5.0, 9.0, -1.0, 4.0;
    const Normalizer n = Normalizer::fit(b, y);
    Matrix corners(2, 2);
    corners << 0.0, 0.0, 100.0, 100.0;
    const Matrix u = n.normalize_inputs(corners);
    CHECK(u(0, 0) == -1.0);
    CHECK(u(1, 1) == 1.0);
    const Vector z = n.standardize_targets(y);
    CHECK(std::abs(z.mean()) < 1e-10);
    CHECK(std::abs(std::sqrt(z.squaredNorm() / 5.0) - 1.0) < 1e-10);
    CHECK(n.destandardize_targets(z).isApprox(y));
    CHECK(n.denormalize_inputs(u).isApprox(corners));
}

TEST_CASE("prediction maps carry attention for the attentive kernel") {
    ExperimentConfig c = small_1d();
    c.seeds = {0};
    c.export_maps = true;
    const auto r = harness::run_experiment(c);
    REQUIRE(r.runs[0].maps.has_value());
    const auto& m = *r.runs[0].maps;
    CHECK(m.mean.size() == 40);
    CHECK(m.weights.cols() == 4);
    CHECK(m.memberships.cols() == 4);
    CHECK(m.samples.rows() == 30);
    CHECK((m.stddev.array() >= 0.0).all());
}

TEST_CASE("rbf on a stationary raster beats the mean predictor") {
    ExperimentConfig c = small_raster();
    c.env = "synthetic:stationary";
    c.n_init = 50;
    c.n_max = 300;
    c.init_iters = 50;
    c.eval_every = 1000;
    c.test_grid = 20;
    const auto r = harness::run_experiment(c);
    REQUIRE(r.all_ok());
    CHECK(r.runs[0].curve.back().num_samples == 300);
    CHECK(r.runs[0].curve.back().smse < 1.0);
}

TEST_CASE("suite cardinalities") {
    ExperimentConfig c = small_1d();
    c.n_max = c.n_init;
    c.sweep_M = {2, 3};
    c.sweep_H = {4};
    c.sweep_l_min = {0.01};
    c.sweep_l_max = {0.3, 0.6};
    const auto rows = suites::run_sensitivity_suite(c);
    CHECK(rows.size() == (2 + 1 + 1 + 2) * c.seeds.size());

    const auto ablation = suites::run_ablation_suite(c);
    CHECK(ablation.size() == 4);
    for (const auto& r : ablation) {
        CHECK(r.strategy == "random");
        CHECK(r.runs.size() == c.seeds.size());
    }

    c.overfit_kernels = {"rbf", "ak"};
    c.overfit_iters = 7;
    c.overfit_samples = 25;
    const auto trace = suites::run_overfitting_suite(c);
    CHECK(trace.size() == 2 * c.seeds.size() * 7);
    CHECK(trace.front().iteration == 1);
    CHECK(trace.back().iteration == 7);
}

TEST_CASE("a degenerate sweep equals the plain experiment") {
    ExperimentConfig c = small_1d();
    c.seeds = {0};
    c.sweep_M = {4};
    c.sweep_H = {};
    c.sweep_l_min = {};
    c.sweep_l_max = {};
    const auto rows = suites::run_sensitivity_suite(c);
    REQUIRE(rows.size() == 1);
    const auto plain = harness::run_experiment(c);
    CHECK(rows[0].summary.msll == metrics::curve_average(plain.runs[0].curve).msll);
}

TEST_CASE("unknown environments are rejected") {
    ExperimentConfig c = small_1d();
    c.env = "1d:unknown";
    CHECK_THROWS(harness::run_experiment(c));
}

TEST_CASE("a failing seed is recorded and the others still run") {
    // A flat raster has zero test-target variance, so scoring throws.
    const auto path = std::filesystem::temp_directory_path() / "akgp_flat_raster.txt";
    env::RasterEnv flat;
    flat.values = Matrix::Constant(5, 5, 3.0);
    flat.extent = {0, 10, 0, 10};
    env::save_raster(path, flat);
    ExperimentConfig c = small_raster();
    c.env = "raster:" + path.string();
    c.seeds = {0, 1};
    const auto r = harness::run_experiment(c);
    CHECK_FALSE(r.all_ok());
    REQUIRE(r.runs.size() == 2);
    for (const auto& run : r.runs) {
        CHECK_FALSE(run.ok);
        CHECK(run.error.find("zero variance") != std::string::npos);
    }
    CHECK(r.env == "akgp_flat_raster");
    std::filesystem::remove(path);
}
