#include "akgp/suites.hpp"

#include <spdlog/spdlog.h>

#include "akgp/planning.hpp"

namespace akgp::suites {

namespace {

void append_rows(std::vector<SweepRow>& rows, const std::string& factor, const std::string& value,
                 const ExperimentConfig& config) {
    const harness::ExperimentResult result = harness::run_experiment(config);
    for (const auto& run : result.runs) {
        SweepRow row;
        row.factor = factor;
        row.value = value;
        row.seed = run.seed;
        row.ok = run.ok;
        if (run.ok) row.summary = metrics::curve_average(run.curve);
        rows.push_back(row);
    }
}

}  // namespace

std::vector<SweepRow> run_sensitivity_suite(const ExperimentConfig& config) {
    std::vector<SweepRow> rows;
    for (int m : config.sweep_M) {
        ExperimentConfig c = config;
        c.num_lengthscales = m;
        append_rows(rows, "M", std::to_string(m), c);
    }
    for (int h : config.sweep_H) {
        ExperimentConfig c = config;
        c.hidden_dim = h;
        append_rows(rows, "H", std::to_string(h), c);
    }
    for (double l : config.sweep_l_min) {
        ExperimentConfig c = config;
        c.l_min = l;
        append_rows(rows, "l_min", format_double(l), c);
    }
    for (double l : config.sweep_l_max) {
        ExperimentConfig c = config;
        c.l_max = l;
        append_rows(rows, "l_max", format_double(l), c);
    }
    return rows;
}

std::vector<harness::ExperimentResult> run_ablation_suite(const ExperimentConfig& config) {
    std::vector<harness::ExperimentResult> results;
    for (const auto& variant : config.ablation_variants) {
        ExperimentConfig c = config;
        c.kernel = variant;
        c.strategy = "random";
        results.push_back(harness::run_experiment(c));
    }
    return results;
}

std::vector<OverfitRow> run_overfitting_suite(const ExperimentConfig& config) {
    config.validate();
    const env::Environment environment = harness::build_environment(config);
    const harness::TestSet test = harness::make_test_set(environment, config);
    const Bounds bounds = env::bounds(environment);
    const int num_samples = config.overfit_samples > 0 ? config.overfit_samples : config.n_max;

    std::vector<OverfitRow> rows;
    for (const auto& kernel : config.overfit_kernels) {
        for (std::uint64_t seed : config.seeds) {
            std::mt19937_64 kernel_rng = harness::make_rng(seed, 1);
            std::mt19937_64 sampling_rng = harness::make_rng(seed, 2);
            std::mt19937_64 noise_rng = harness::make_rng(seed, 3);

            const Matrix X = planning::random_locations(bounds, num_samples, sampling_rng);
            const Vector y = env::observe(environment, X, noise_rng);
            const Normalizer normalizer = Normalizer::fit(bounds, y);
            const harness::TestSet train{X, y};

            ExperimentConfig c = config;
            c.kernel = kernel;
            gpr::GPRModel model(kernels::make_kernel(kernel, harness::kernel_options(c, bounds.dim()), kernel_rng),
                                config.init_noise);
            model.add_data(normalizer.normalize_inputs(X), normalizer.standardize_targets(y));

            auto log_row = [&](int iteration, const gpr::GPRModel& m) {
                OverfitRow row;
                row.kernel = kernel;
                row.seed = seed;
                row.iteration = iteration;
                row.lml = m.log_marginal_likelihood();
                row.train_msll = harness::evaluate_model(m, normalizer, train, y).msll;
                row.test_msll = harness::evaluate_model(m, normalizer, test, y).msll;
                rows.push_back(row);
            };

            gpr::OptimizeOptions opt;
            opt.num_iters = config.overfit_iters;
            opt.lr_hyper = config.lr_hyper;
            opt.lr_net = config.lr_net;
            opt.on_iteration = [&](int iter, const gpr::GPRModel& m) {
                const int step = iter + 1;
                if (step % config.eval_every == 0 || step == config.overfit_iters) log_row(step, m);
            };
            const gpr::OptimizeResult r = model.optimize(opt);
            if (r.aborted) spdlog::warn("overfitting {} seed {}: {}", kernel, seed, r.diagnostic);
            spdlog::info("overfitting {} seed {}: train msll {:.4f}, test msll {:.4f}", kernel, seed,
                         rows.back().train_msll, rows.back().test_msll);
        }
    }
    return rows;
}

}  // namespace akgp::suites
