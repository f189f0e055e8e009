#include "akgp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include <spdlog/spdlog.h>

#include "akgp/planning.hpp"

namespace akgp::harness {

namespace {

constexpr std::uint64_t kKernelStream = 1;
constexpr std::uint64_t kSamplingStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double population_variance(const Vector& v) { return (v.array() - v.mean()).square().mean(); }

}  // namespace

bool ExperimentResult::all_ok() const {
    return std::all_of(runs.begin(), runs.end(), [](const SeedRun& r) { return r.ok; });
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), 0x5eedu};
    return std::mt19937_64(seq);
}

env::Environment build_environment(const ExperimentConfig& config) {
    const std::string& e = config.env;
    if (e.rfind("synthetic:", 0) == 0) {
        env::SyntheticRasterSpec spec;
        spec.generator = e.substr(10);
        spec.rows = config.raster_rows;
        spec.cols = config.raster_cols;
        spec.seed = config.env_seed;
        spec.obs_noise_std = config.obs_noise_std;
        return env::make_synthetic_raster(spec);
    }
    if (e.rfind("raster:", 0) == 0) return env::load_raster(e.substr(7), config.obs_noise_std);
    if (e.rfind("1d:", 0) == 0) return env::Synthetic1D{env::parse_synthetic_id(e.substr(3)), config.obs_noise_std};
    throw ParseError("unknown environment '" + e + "'");
}

TestSet make_test_set(const env::Environment& environment, const ExperimentConfig& config) {
    const Bounds b = env::bounds(environment);
    TestSet t;
    if (b.dim() == 1) {
        t.locations = Vector::LinSpaced(config.test_grid_1d, b.lower(0), b.upper(0));
    } else {
        const int n = config.test_grid;
        const Vector xs = Vector::LinSpaced(n, b.lower(0), b.upper(0));
        const Vector ys = Vector::LinSpaced(n, b.lower(1), b.upper(1));
        t.locations.resize(static_cast<Eigen::Index>(n) * n, 2);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                t.locations.row(static_cast<Eigen::Index>(i) * n + j) << xs(j), ys(i);
            }
        }
    }
    t.targets = env::truth(environment, t.locations);
    return t;
}

kernels::KernelOptions kernel_options(const ExperimentConfig& config, Eigen::Index input_dim) {
    kernels::KernelOptions o;
    o.input_dim = input_dim;
    o.grid = kernels::LengthscaleGrid{config.l_min, config.l_max, config.num_lengthscales};
    o.hidden_dim = config.hidden_dim;
    o.dkl_feature_dim = config.dkl_feature_dim;
    o.amplitude = config.init_amplitude;
    o.rbf_lengthscale = config.rbf_lengthscale;
    o.dkl_lengthscale = config.rbf_lengthscale;
    return o;
}

metrics::MetricsRecord evaluate_model(const gpr::GPRModel& model, const Normalizer& normalizer, const TestSet& test,
                                      const Vector& train_targets) {
    const gpr::Prediction p = model.predict(normalizer.normalize_inputs(test.locations));
    const double noise_var = model.noise_scale() * model.noise_scale();
    const Vector mean = normalizer.destandardize_targets(p.mean);
    const Vector var = normalizer.destandardize_variance((p.variance.array() + noise_var).matrix());
    metrics::MetricsRecord r =
        metrics::evaluate(test.targets, mean, var, train_targets.mean(), population_variance(train_targets));
    r.num_samples = model.num_train();
    return r;
}

namespace {

PredictionMaps snapshot(const gpr::GPRModel& model, const Normalizer& normalizer, const TestSet& test) {
    PredictionMaps m;
    m.locations = test.locations;
    m.truth = test.targets;
    const Matrix Xn = normalizer.normalize_inputs(test.locations);
    const gpr::Prediction p = model.predict(Xn);
    m.mean = normalizer.destandardize_targets(p.mean);
    m.stddev = normalizer.destandardize_variance(p.variance).cwiseSqrt();
    if (const auto* ak = dynamic_cast<const kernels::AttentiveKernel*>(&model.kernel())) {
        const kernels::Attention a = ak->attention(Xn);
        m.weights = a.weights;
        m.memberships = a.memberships;
        m.lengthscales = ak->grid().lengthscales();
    }
    m.samples = normalizer.denormalize_inputs(model.X_train());
    return m;
}

}  // namespace

SeedRun run_seed(const ExperimentConfig& config, const env::Environment& environment, const TestSet& test,
                 std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    SeedRun run;
    run.seed = seed;

    const Bounds bounds = env::bounds(environment);
    std::mt19937_64 kernel_rng = make_rng(seed, kKernelStream);
    std::mt19937_64 sampling_rng = make_rng(seed, kSamplingStream);
    std::mt19937_64 noise_rng = make_rng(seed, kNoiseStream);

    const Matrix X0 = planning::random_locations(bounds, config.n_init, sampling_rng);
    Vector all_targets = env::observe(environment, X0, noise_rng);
    const Normalizer normalizer = Normalizer::fit(bounds, all_targets);

    gpr::GPRModel model(kernels::make_kernel(config.kernel, kernel_options(config, bounds.dim()), kernel_rng),
                        config.init_noise);
    model.add_data(normalizer.normalize_inputs(X0), normalizer.standardize_targets(all_targets));

    gpr::OptimizeOptions opt;
    opt.lr_hyper = config.lr_hyper;
    opt.lr_net = config.lr_net;
    auto train = [&](int iters) {
        opt.num_iters = iters;
        const gpr::OptimizeResult r = model.optimize(opt);
        if (r.aborted) spdlog::warn("seed {}: {}", seed, r.diagnostic);
        run.optimizer_iters.push_back(iters);
    };
    auto record = [&]() {
        metrics::MetricsRecord r = evaluate_model(model, normalizer, test, all_targets);
        r.wall_time_s = seconds_since(start);
        run.curve.push_back(r);
    };

    train(config.effective_init_iters());
    record();

    const double half_range = 0.5 * (bounds.upper - bounds.lower).mean();
    planning::RobotState robot;
    robot.position = bounds.center();
    robot.step_len = config.step_len * half_range;
    robot.sample_spacing = config.sample_spacing * half_range;

    const planning::VarianceFn predictive_variance = [&](const Matrix& locations) {
        const gpr::Prediction p = model.predict(normalizer.normalize_inputs(locations));
        return Vector((p.variance.array() + model.noise_scale() * model.noise_scale()).matrix());
    };

    long next_eval = model.num_train() + config.eval_every;
    while (model.num_train() < config.n_max) {
        Matrix X_t;
        Vector y_t;
        if (config.strategy == "myopic") {
            const Vector waypoint =
                planning::informative_waypoint(predictive_variance, robot, bounds, sampling_rng, config.num_candidates);
            planning::TrackResult tr = planning::track_and_sample(robot, waypoint, environment, bounds, noise_rng);
            X_t = std::move(tr.locations);
            y_t = std::move(tr.observations);
        } else {
            const Vector waypoint =
                config.strategy == "active"
                    ? planning::active_waypoint(predictive_variance, bounds, sampling_rng, config.num_candidates)
                    : planning::random_waypoint(bounds, sampling_rng);
            X_t = waypoint.transpose();
            y_t = env::observe(environment, X_t, noise_rng);
        }

        Vector grown(all_targets.size() + y_t.size());
        grown << all_targets, y_t;
        all_targets = std::move(grown);
        model.add_data(normalizer.normalize_inputs(X_t), normalizer.standardize_targets(y_t));
        train(static_cast<int>(y_t.size()));

        if (model.num_train() >= next_eval || model.num_train() >= config.n_max) {
            record();
            while (next_eval <= model.num_train()) next_eval += config.eval_every;
        }
    }

    if (config.export_maps) run.maps = snapshot(model, normalizer, test);
    return run;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const env::Environment environment = build_environment(config);
    const TestSet test = make_test_set(environment, config);

    ExperimentResult result;
    result.env = config.env_label();
    result.kernel = config.kernel;
    result.strategy = config.strategy;
    result.runs.resize(config.seeds.size());

    auto run_one = [&](std::size_t i) {
        const std::uint64_t seed = config.seeds[i];
        try {
            result.runs[i] = run_seed(config, environment, test, seed);
            const auto& last = result.runs[i].curve.back();
            spdlog::info("{} {} {} seed {}: n={} smse={:.4f} msll={:.4f}", result.env, config.kernel, config.strategy,
                         seed, last.num_samples, last.smse, last.msll);
        } catch (const std::exception& e) {
            result.runs[i] = SeedRun{};
            result.runs[i].seed = seed;
            result.runs[i].ok = false;
            result.runs[i].error = e.what();
            spdlog::error("{} {} {} seed {} failed: {}", result.env, config.kernel, config.strategy, seed, e.what());
        }
    };

    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), config.seeds.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < config.seeds.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < config.seeds.size(); i = next++) run_one(i);
            });
        }
    }
    return result;
}

}  // namespace akgp::harness
