#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "akgp/config.hpp"
#include "akgp/export.hpp"
#include "akgp/harness.hpp"
#include "akgp/plot.hpp"
#include "akgp/suites.hpp"

namespace fs = std::filesystem;
using akgp::ExperimentConfig;

namespace {

struct Overrides {
    std::string config_path;
    std::string kernel;
    std::string strategy;
    std::string out;
    std::vector<std::string> sets;
    long long seed = -1;
    int n_max = -1;
    int jobs = -1;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--jobs", o.jobs, "Seeds run in parallel")->check(CLI::PositiveNumber);
    cmd->add_option("--set", o.sets, "Extra key=value config assignments");
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig c = akgp::load_config(o.config_path);
    for (const auto& kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw akgp::ParseError("--set expects key=value, got '" + kv + "'");
        c.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!o.kernel.empty()) c.kernel = o.kernel;
    if (!o.strategy.empty()) c.strategy = o.strategy;
    if (o.seed >= 0) c.seeds = {static_cast<std::uint64_t>(o.seed)};
    if (o.n_max > 0) c.n_max = o.n_max;
    if (o.jobs > 0) c.jobs = o.jobs;
    if (!o.out.empty()) c.output_dir = o.out;
    c.validate();
    return c;
}

void save_config(const ExperimentConfig& c, const std::string& name) {
    fs::create_directories(c.output_dir);
    std::ofstream out(fs::path(c.output_dir) / name);
    out << c.to_text();
}

int report(const akgp::harness::ExperimentResult& r) {
    int failed = 0;
    for (const auto& run : r.runs) {
        if (!run.ok) {
            std::cerr << "seed " << run.seed << " failed: " << run.error << '\n';
            ++failed;
        }
    }
    return failed;
}

int cmd_run(const Overrides& o) {
    const ExperimentConfig c = resolve(o);
    save_config(c, "config.txt");
    const auto result = akgp::harness::run_experiment(c);
    const fs::path dir = c.output_dir;
    std::cout << akgp::io::write_experiment_csv(dir, result).string() << '\n';
    std::cout << akgp::io::summarize_directory(dir).string() << '\n';
    for (const auto& p : akgp::io::write_maps_csv(dir, result)) std::cout << p.string() << '\n';
    return report(result) > 0 ? 1 : 0;
}

int cmd_sweep(const Overrides& o, const std::string& suite) {
    const ExperimentConfig c = resolve(o);
    save_config(c, suite + "_config.txt");
    const fs::path dir = c.output_dir;
    int failed = 0;
    if (suite == "sensitivity") {
        const auto rows = akgp::suites::run_sensitivity_suite(c);
        for (const auto& r : rows) failed += r.ok ? 0 : 1;
        std::cout << akgp::io::write_sweep_csv(dir, rows).string() << '\n';
    } else if (suite == "ablation") {
        const auto results = akgp::suites::run_ablation_suite(c);
        for (const auto& r : results) {
            failed += report(r);
            std::cout << akgp::io::write_experiment_csv(dir, r).string() << '\n';
        }
        std::cout << akgp::io::write_summary_csv(dir, results, "ablation_summary.csv").string() << '\n';
    } else {
        const auto rows = akgp::suites::run_overfitting_suite(c);
        std::cout << akgp::io::write_overfit_csv(dir, rows).string() << '\n';
    }
    return failed > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive GP regression for informative sampling"};
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

    Overrides run_opts;
    auto* run = app.add_subcommand("run", "Run one experiment over every configured seed");
    add_common(run, run_opts);
    run->add_option("--kernel", run_opts.kernel, "rbf, ak, ak-weight, ak-mask, ak-nnx2, gibbs or dkl");
    run->add_option("--strategy", run_opts.strategy, "random, active or myopic");
    run->add_option("--seed", run_opts.seed, "Run only this seed")->check(CLI::NonNegativeNumber);
    run->add_option("--n-max", run_opts.n_max, "Sample budget")->check(CLI::PositiveNumber);

    Overrides sweep_opts;
    std::string suite;
    auto* sweep = app.add_subcommand("sweep", "Run a sensitivity, ablation or overfitting suite");
    add_common(sweep, sweep_opts);
    sweep->add_option("--suite", suite, "Suite name")
        ->required()
        ->check(CLI::IsMember({"sensitivity", "ablation", "overfitting"}));

    std::string plot_dir;
    auto* plot = app.add_subcommand("plot", "Render curves and maps found in a results directory");
    plot->add_option("--in", plot_dir, "Results directory")->required()->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        if (*run) return cmd_run(run_opts);
        if (*sweep) return cmd_sweep(sweep_opts, suite);
        for (const auto& p : akgp::plot::plot_directory(plot_dir)) std::cout << p.string() << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
