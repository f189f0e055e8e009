#ifndef AKGP_SUITES_HPP
#define AKGP_SUITES_HPP

#include <string>
#include <vector>

#include "akgp/config.hpp"
#include "akgp/harness.hpp"

namespace akgp::suites {

/// One (factor value, seed) cell of the sensitivity sweep, summarized by the
/// curve average of its metrics.
struct SweepRow {
    std::string factor;  // M, H, l_min or l_max
    std::string value;
    std::uint64_t seed = 0;
    bool ok = true;
    metrics::MetricsRecord summary;
};

/// Varies one AK hyperparameter at a time around the base config.
std::vector<SweepRow> run_sensitivity_suite(const ExperimentConfig& config);

/// Every ablation variant under the random strategy.
std::vector<harness::ExperimentResult> run_ablation_suite(const ExperimentConfig& config);

struct OverfitRow {
    std::string kernel;
    std::uint64_t seed = 0;
    int iteration = 0;
    double lml = 0.0;
    double train_msll = 0.0;
    double test_msll = 0.0;
};

/// Fits each kernel on a fixed random sample set for overfit_iters optimizer
/// steps, recording train and test MSLL after every eval_every-th step.
std::vector<OverfitRow> run_overfitting_suite(const ExperimentConfig& config);

}  // namespace akgp::suites

#endif  // AKGP_SUITES_HPP
