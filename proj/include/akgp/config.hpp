#ifndef AKGP_CONFIG_HPP
#define AKGP_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace akgp {

/// Every knob of one experiment. Text form is `key = value` per line with
/// `#` comments; lists are comma separated. Inputs live in workspace units,
/// except step_len / sample_spacing / lengthscales, which are in normalized
/// ([-1, 1]) input units.
struct ExperimentConfig {
    // Environment: "synthetic:nonstationary", "synthetic:stationary",
    // "raster:<path>", "1d:five_partition" or "1d:xsin40x4".
    std::string env = "synthetic:nonstationary";
    std::uint64_t env_seed = 0;
    int raster_rows = 100;
    int raster_cols = 100;
    double obs_noise_std = 1.0;

    std::string kernel = "ak";
    std::string strategy = "random";  // random | active | myopic

    int num_lengthscales = 10;  // M
    int hidden_dim = 10;        // H
    double l_min = 0.01;
    double l_max = 0.5;
    int dkl_feature_dim = 0;  // 0: same as input dimension

    double init_amplitude = 1.0;
    double init_noise = 0.1;
    double rbf_lengthscale = 0.5;

    int n_init = 50;
    int n_max = 600;
    int init_iters = -1;  // optimizer iterations after the initial samples; -1 means n_init
    double lr_hyper = 1e-2;
    double lr_net = 1e-3;

    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    int test_grid = 100;     // points per axis for rasters
    int test_grid_1d = 500;  // points for 1-D functions
    int eval_every = 1;      // evaluate after an epoch once this many new samples accumulated
    int num_candidates = 1000;
    double step_len = 0.1;
    double sample_spacing = 0.05;

    std::string output_dir = "results";
    int jobs = 1;
    bool export_maps = false;

    // Sweep suites.
    std::vector<int> sweep_M{2, 3, 5, 10, 20};
    std::vector<int> sweep_H{2, 5, 10, 20};
    std::vector<double> sweep_l_min{0.005, 0.01, 0.05, 0.1};
    std::vector<double> sweep_l_max{0.1, 0.3, 0.5, 1.0};
    std::vector<std::string> ablation_variants{"ak", "ak-weight", "ak-mask", "ak-nnx2"};
    std::vector<std::string> overfit_kernels{"rbf", "ak", "gibbs", "dkl"};
    int overfit_iters = 1000;
    int overfit_samples = 0;  // 0: use n_max

    /// Apply one `key = value` assignment; throws ParseError on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    /// Throws ParseError describing the first out-of-range field.
    void validate() const;
    [[nodiscard]] int effective_init_iters() const { return init_iters < 0 ? n_init : init_iters; }
    /// Short environment label used in file names.
    [[nodiscard]] std::string env_label() const;
    /// Round-trippable text form.
    [[nodiscard]] std::string to_text() const;
};

ExperimentConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace akgp

#endif  // AKGP_CONFIG_HPP
