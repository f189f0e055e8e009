#ifndef AKGP_HARNESS_HPP
#define AKGP_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "akgp/config.hpp"
#include "akgp/environments.hpp"
#include "akgp/gpr.hpp"
#include "akgp/metrics.hpp"
#include "akgp/normalizer.hpp"

namespace akgp::harness {

struct TestSet {
    Matrix locations;  // workspace units
    Vector targets;    // noiseless ground truth
};

/// Prediction snapshot over the test set, for heatmaps and attention plots.
struct PredictionMaps {
    Matrix locations;
    Vector truth;
    Vector mean;
    Vector stddev;
    Matrix weights;      // AK only: per-location lengthscale attention
    Matrix memberships;  // AK only
    Vector lengthscales;  // base-kernel lengthscales (AK only)
    Matrix samples;       // training locations in workspace units
};

struct SeedRun {
    std::uint64_t seed = 0;
    std::vector<metrics::MetricsRecord> curve;
    std::vector<long> optimizer_iters;  // per epoch, equals the epoch's sample count
    bool ok = true;
    std::string error;
    std::optional<PredictionMaps> maps;
};

struct ExperimentResult {
    std::string env;
    std::string kernel;
    std::string strategy;
    std::vector<SeedRun> runs;

    [[nodiscard]] bool all_ok() const;
};

env::Environment build_environment(const ExperimentConfig& config);
TestSet make_test_set(const env::Environment& environment, const ExperimentConfig& config);

/// Disjoint random stream per (seed, purpose).
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

kernels::KernelOptions kernel_options(const ExperimentConfig& config, Eigen::Index input_dim);

/// GP predictions scored in workspace units. The predictive variance handed
/// to the metrics includes observation noise.
metrics::MetricsRecord evaluate_model(const gpr::GPRModel& model, const Normalizer& normalizer,
                                      const TestSet& test, const Vector& train_targets);

/// One seed of the sampling loop: initial uniform samples, then
/// strategy -> sample -> add_data -> optimize(N_t) until n_max samples.
SeedRun run_seed(const ExperimentConfig& config, const env::Environment& environment, const TestSet& test,
                 std::uint64_t seed);

/// Every seed of `config`. A failing seed is recorded and logged; the rest continue.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace akgp::harness

#endif  // AKGP_HARNESS_HPP
