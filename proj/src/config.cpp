#include "akgp/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "akgp/common.hpp"

namespace akgp {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

long long to_integer(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size()) throw ParseError(key + ": expected an integer, got '" + value + "'");
    return v;
}

double to_real(const std::string& key, const std::string& value) {
    try {
        return parse_double(value);
    } catch (const ParseError&) {
        throw ParseError(key + ": expected a number, got '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ParseError(key + ": expected true/false, got '" + value + "'");
}

template <typename T>
std::string join(const std::vector<T>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ",";
        if constexpr (std::is_same_v<T, std::string>) {
            out += items[i];
        } else if constexpr (std::is_floating_point_v<T>) {
            out += format_double(items[i]);
        } else {
            out += std::to_string(items[i]);
        }
    }
    return out;
}

struct Field {
    const char* key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define AKGP_STRING_FIELD(name) \
    Field{#name, [](ExperimentConfig& c, const std::string& v) { c.name = v; }, [](const ExperimentConfig& c) { return c.name; }}
#define AKGP_INT_FIELD(name)                                                                              \
    Field{#name, [](ExperimentConfig& c, const std::string& v) { c.name = static_cast<decltype(c.name)>(to_integer(#name, v)); }, \
          [](const ExperimentConfig& c) { return std::to_string(c.name); }}
#define AKGP_REAL_FIELD(name)                                                                       \
    Field{#name, [](ExperimentConfig& c, const std::string& v) { c.name = to_real(#name, v); }, \
          [](const ExperimentConfig& c) { return format_double(c.name); }}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        AKGP_STRING_FIELD(env),
        AKGP_INT_FIELD(env_seed),
        AKGP_INT_FIELD(raster_rows),
        AKGP_INT_FIELD(raster_cols),
        AKGP_REAL_FIELD(obs_noise_std),
        AKGP_STRING_FIELD(kernel),
        AKGP_STRING_FIELD(strategy),
        AKGP_INT_FIELD(num_lengthscales),
        AKGP_INT_FIELD(hidden_dim),
        AKGP_REAL_FIELD(l_min),
        AKGP_REAL_FIELD(l_max),
        AKGP_INT_FIELD(dkl_feature_dim),
        AKGP_REAL_FIELD(init_amplitude),
        AKGP_REAL_FIELD(init_noise),
        AKGP_REAL_FIELD(rbf_lengthscale),
        AKGP_INT_FIELD(n_init),
        AKGP_INT_FIELD(n_max),
        AKGP_INT_FIELD(init_iters),
        AKGP_REAL_FIELD(lr_hyper),
        AKGP_REAL_FIELD(lr_net),
        Field{"seeds",
              [](ExperimentConfig& c, const std::string& v) {
                  c.seeds.clear();
                  for (const auto& s : split_list(v)) c.seeds.push_back(static_cast<std::uint64_t>(to_integer("seeds", s)));
              },
              [](const ExperimentConfig& c) { return join(c.seeds); }},
        Field{"num_seeds",
              [](ExperimentConfig& c, const std::string& v) {
                  const auto n = to_integer("num_seeds", v);
                  c.seeds.clear();
                  for (long long i = 0; i < n; ++i) c.seeds.push_back(static_cast<std::uint64_t>(i));
              },
              nullptr},
        AKGP_INT_FIELD(test_grid),
        AKGP_INT_FIELD(test_grid_1d),
        AKGP_INT_FIELD(eval_every),
        AKGP_INT_FIELD(num_candidates),
        AKGP_REAL_FIELD(step_len),
        AKGP_REAL_FIELD(sample_spacing),
        AKGP_STRING_FIELD(output_dir),
        AKGP_INT_FIELD(jobs),
        Field{"export_maps", [](ExperimentConfig& c, const std::string& v) { c.export_maps = to_bool("export_maps", v); },
              [](const ExperimentConfig& c) { return std::string(c.export_maps ? "true" : "false"); }},
        Field{"sweep_M",
              [](ExperimentConfig& c, const std::string& v) {
                  c.sweep_M.clear();
                  for (const auto& s : split_list(v)) c.sweep_M.push_back(static_cast<int>(to_integer("sweep_M", s)));
              },
              [](const ExperimentConfig& c) { return join(c.sweep_M); }},
        Field{"sweep_H",
              [](ExperimentConfig& c, const std::string& v) {
                  c.sweep_H.clear();
                  for (const auto& s : split_list(v)) c.sweep_H.push_back(static_cast<int>(to_integer("sweep_H", s)));
              },
              [](const ExperimentConfig& c) { return join(c.sweep_H); }},
        Field{"sweep_l_min",
              [](ExperimentConfig& c, const std::string& v) {
                  c.sweep_l_min.clear();
                  for (const auto& s : split_list(v)) c.sweep_l_min.push_back(to_real("sweep_l_min", s));
              },
              [](const ExperimentConfig& c) { return join(c.sweep_l_min); }},
        Field{"sweep_l_max",
              [](ExperimentConfig& c, const std::string& v) {
                  c.sweep_l_max.clear();
                  for (const auto& s : split_list(v)) c.sweep_l_max.push_back(to_real("sweep_l_max", s));
              },
              [](const ExperimentConfig& c) { return join(c.sweep_l_max); }},
        Field{"ablation_variants",
              [](ExperimentConfig& c, const std::string& v) { c.ablation_variants = split_list(v); },
              [](const ExperimentConfig& c) { return join(c.ablation_variants); }},
        Field{"overfit_kernels", [](ExperimentConfig& c, const std::string& v) { c.overfit_kernels = split_list(v); },
              [](const ExperimentConfig& c) { return join(c.overfit_kernels); }},
        AKGP_INT_FIELD(overfit_iters),
        AKGP_INT_FIELD(overfit_samples),
    };
    return table;
}

#undef AKGP_STRING_FIELD
#undef AKGP_INT_FIELD
#undef AKGP_REAL_FIELD

bool known_kernel(const std::string& k) {
    return k == "rbf" || k == "ak" || k == "ak-weight" || k == "ak-mask" || k == "ak-nnx2" || k == "gibbs" ||
           k == "dkl";
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    for (const auto& f : fields()) {
        if (key == f.key) {
            f.set(*this, trim(value));
            return;
        }
    }
    throw ParseError("unknown config key '" + key + "'");
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ParseError("config: " + msg); };
    if (!(env.rfind("synthetic:", 0) == 0 || env.rfind("raster:", 0) == 0 || env.rfind("1d:", 0) == 0)) {
        fail("env must start with synthetic:, raster: or 1d:");
    }
    if (!known_kernel(kernel)) fail("unknown kernel '" + kernel + "'");
    if (strategy != "random" && strategy != "active" && strategy != "myopic") {
        fail("strategy must be random, active or myopic");
    }
    if (num_lengthscales < 2) fail("num_lengthscales must be at least 2");
    if (hidden_dim < 1) fail("hidden_dim must be positive");
    if (!(l_min > 0.0) || !(l_max > l_min)) fail("need 0 < l_min < l_max");
    if (dkl_feature_dim < 0) fail("dkl_feature_dim must be >= 0");
    if (!(init_amplitude > 0.0) || !(init_noise > 0.0) || !(rbf_lengthscale > 0.0)) {
        fail("initial amplitude, noise and lengthscale must be positive");
    }
    if (n_init < 1) fail("n_init must be positive");
    if (n_init > n_max) fail("n_init must not exceed n_max");
    if (!(lr_hyper >= 0.0) || !(lr_net >= 0.0)) fail("learning rates must be non-negative");
    if (seeds.empty()) fail("seeds must not be empty");
    if (test_grid < 2 || test_grid_1d < 2) fail("test grids need at least 2 points per axis");
    if (eval_every < 1) fail("eval_every must be positive");
    if (num_candidates < 1) fail("num_candidates must be positive");
    if (!(step_len > 0.0) || !(sample_spacing > 0.0)) fail("step_len and sample_spacing must be positive");
    if (!(obs_noise_std >= 0.0)) fail("obs_noise_std must be non-negative");
    if (raster_rows < 2 || raster_cols < 2) fail("raster_rows and raster_cols must be at least 2");
    if (jobs < 1) fail("jobs must be positive");
    if (overfit_iters < 0 || overfit_samples < 0) fail("overfitting settings must be non-negative");
    for (const auto& k : ablation_variants) {
        if (!known_kernel(k)) fail("unknown ablation variant '" + k + "'");
    }
    for (const auto& k : overfit_kernels) {
        if (!known_kernel(k)) fail("unknown overfitting kernel '" + k + "'");
    }
}

std::string ExperimentConfig::env_label() const {
    const auto colon = env.find(':');
    std::string rest = colon == std::string::npos ? env : env.substr(colon + 1);
    if (env.rfind("raster:", 0) == 0) rest = std::filesystem::path(rest).stem().string();
    return rest;
}

std::string ExperimentConfig::to_text() const {
    std::string out;
    for (const auto& f : fields()) {
        if (!f.get) continue;
        out += std::string(f.key) + " = " + f.get(*this) + "\n";
    }
    return out;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        try {
            cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ParseError& e) {
            throw ParseError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path.string());
}

}  // namespace akgp
