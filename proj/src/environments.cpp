#include "akgp/environments.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include <spdlog/spdlog.h>

namespace akgp::env {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFlatEdge = 0.35;
constexpr double kRockyEdge = 0.65;

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

int parse_positive_int(std::string_view token, const std::string& what) {
    std::size_t used = 0;
    const std::string s(token);
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw ParseError(what + ": not an integer: '" + s + "'");
    }
    if (used != s.size()) throw ParseError(what + ": not an integer: '" + s + "'");
    return v;
}

}  // namespace

Bounds Extent::bounds() const { return Bounds{Vector{{x_min, y_min}}, Vector{{x_max, y_max}}}; }

void RasterEnv::validate() const {
    if (values.rows() < 2 || values.cols() < 2) throw DomainError("raster needs at least 2 rows and 2 columns");
    if (!(extent.x_min < extent.x_max) || !(extent.y_min < extent.y_max)) throw DomainError("raster extent is degenerate");
    if (!values.allFinite()) throw DomainError("raster contains non-finite values");
    if (!(obs_noise_std >= 0.0)) throw DomainError("observation noise must be non-negative");
}

RasterEnv parse_raster(std::istream& in, const std::string& source) {
    std::string line;
    auto next_content_line = [&](std::string& out) {
        while (std::getline(in, out)) {
            if (!split_ws(out).empty()) return true;
        }
        return false;
    };
    if (!next_content_line(line)) throw ParseError(source + ": empty raster file");
    const auto header = split_ws(line);
    if (header.size() != 6) {
        throw ParseError(source + ": header must be 'rows cols x_min x_max y_min y_max', got " +
                         std::to_string(header.size()) + " fields");
    }
    const int rows = parse_positive_int(header[0], source + ": header rows");
    const int cols = parse_positive_int(header[1], source + ": header cols");
    if (rows < 2 || cols < 2) throw ParseError(source + ": raster needs at least 2 rows and 2 columns");

    RasterEnv env;
    try {
        env.extent = Extent{parse_double(header[2]), parse_double(header[3]), parse_double(header[4]),
                            parse_double(header[5])};
    } catch (const ParseError& e) {
        throw ParseError(source + ": header: " + e.what());
    }
    if (!(env.extent.x_min < env.extent.x_max) || !(env.extent.y_min < env.extent.y_max)) {
        throw ParseError(source + ": header extent is degenerate");
    }

    env.values.resize(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (!next_content_line(line)) {
            throw ParseError(source + ": row " + std::to_string(r + 1) + " of " + std::to_string(rows) + " is missing");
        }
        const auto tokens = split_ws(line);
        if (static_cast<int>(tokens.size()) != cols) {
            throw ParseError(source + ": row " + std::to_string(r + 1) + " has " + std::to_string(tokens.size()) +
                             " values, expected " + std::to_string(cols));
        }
        for (int c = 0; c < cols; ++c) {
            double v = 0.0;
            try {
                v = parse_double(tokens[static_cast<std::size_t>(c)]);
            } catch (const ParseError& e) {
                throw ParseError(source + ": row " + std::to_string(r + 1) + ": " + e.what());
            }
            if (!std::isfinite(v)) {
                throw ParseError(source + ": row " + std::to_string(r + 1) + " has a non-finite value");
            }
            env.values(r, c) = v;
        }
    }
    if (next_content_line(line)) throw ParseError(source + ": trailing data after " + std::to_string(rows) + " rows");
    return env;
}

RasterEnv load_raster(const std::filesystem::path& path, double obs_noise_std) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open raster " + path.string());
    RasterEnv env = parse_raster(in, path.string());
    env.obs_noise_std = obs_noise_std;
    env.validate();
    return env;
}

void write_raster(std::ostream& out, const RasterEnv& env) {
    env.validate();
    out << env.values.rows() << ' ' << env.values.cols() << ' ' << format_double(env.extent.x_min) << ' '
        << format_double(env.extent.x_max) << ' ' << format_double(env.extent.y_min) << ' '
        << format_double(env.extent.y_max) << '\n';
    for (Eigen::Index r = 0; r < env.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < env.values.cols(); ++c) {
            if (c > 0) out << ' ';
            out << format_double(env.values(r, c));
        }
        out << '\n';
    }
}

void save_raster(const std::filesystem::path& path, const RasterEnv& env) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write raster " + path.string());
    write_raster(out, env);
}

double query_truth(const RasterEnv& env, const Vector& location) {
    if (location.size() != 2) throw ShapeError("query_truth: raster locations are 2-D");
    const Extent& e = env.extent;
    double x = location(0);
    double y = location(1);
    if (x < e.x_min || x > e.x_max || y < e.y_min || y > e.y_max) {
        spdlog::warn("query_truth: ({}, {}) outside the raster extent, clamping", x, y);
        x = std::clamp(x, e.x_min, e.x_max);
        y = std::clamp(y, e.y_min, e.y_max);
    }
    const Eigen::Index rows = env.values.rows();
    const Eigen::Index cols = env.values.cols();
    const double fc = (x - e.x_min) / (e.x_max - e.x_min) * static_cast<double>(cols - 1);
    const double fr = (e.y_max - y) / (e.y_max - e.y_min) * static_cast<double>(rows - 1);
    const Eigen::Index c0 = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(fc)), cols - 2);
    const Eigen::Index r0 = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(fr)), rows - 2);
    const double tc = fc - static_cast<double>(c0);
    const double tr = fr - static_cast<double>(r0);
    const auto& v = env.values;
    const double top = (1.0 - tc) * v(r0, c0) + tc * v(r0, c0 + 1);
    const double bottom = (1.0 - tc) * v(r0 + 1, c0) + tc * v(r0 + 1, c0 + 1);
    return (1.0 - tr) * top + tr * bottom;
}

Vector query_truth(const RasterEnv& env, const Matrix& locations) {
    require_cols(locations, 2, "query_truth");
    Vector out(locations.rows());
    for (Eigen::Index i = 0; i < locations.rows(); ++i) out(i) = query_truth(env, Vector(locations.row(i).transpose()));
    return out;
}

// ---------------------------------------------------------------------------

double synth_eval(const Synthetic1D& env, double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("synth_eval: x = " + format_double(x) + " outside the domain [0, 1]");
    }
    switch (env.id) {
        case Synthetic1DId::XSin40X4: return x * std::sin(40.0 * std::pow(x, 4));
        case Synthetic1DId::FivePartition:
            if (x < 0.2) return 0.6 + 0.4 * std::sin(kTwoPi * x / 0.4);
            if (x < 0.4) return -0.5 + 0.3 * std::cos(std::numbers::pi * (x - 0.2) / 0.2);
            if (x < 0.6) return 0.1 + 0.5 * std::sin(kTwoPi * (x - 0.4) / 0.05);
            if (x < 0.8) return 1.0 - 1.5 * (x - 0.6);
            return -0.3 + 0.3 * std::sin(std::numbers::pi * (x - 0.8) / 0.2);
    }
    throw DomainError("synth_eval: unknown function id");
}

Synthetic1DId parse_synthetic_id(const std::string& name) {
    if (name == "five_partition") return Synthetic1DId::FivePartition;
    if (name == "xsin40x4") return Synthetic1DId::XSin40X4;
    throw ParseError("unknown synthetic function '" + name + "' (expected five_partition or xsin40x4)");
}

std::string to_string(Synthetic1DId id) {
    return id == Synthetic1DId::FivePartition ? "five_partition" : "xsin40x4";
}

// ---------------------------------------------------------------------------

TerrainRegion terrain_region(const Extent& extent, double x) {
    const double u = (x - extent.x_min) / (extent.x_max - extent.x_min);
    if (u < kFlatEdge) return TerrainRegion::Flat;
    if (u >= kRockyEdge) return TerrainRegion::Rocky;
    return TerrainRegion::Hills;
}

namespace {

RasterEnv nonstationary_raster(const SyntheticRasterSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    struct Bump {
        double cu, cv, width, height;
    };
    std::vector<Bump> bumps;
    for (int k = 0; k < 4; ++k) {
        bumps.push_back({kFlatEdge + (1.0 - kFlatEdge) * unit(rng), unit(rng), 0.12 + 0.08 * unit(rng),
                         10.0 + 15.0 * unit(rng)});
    }
    struct Ridge {
        double freq, dir, phase;
    };
    std::vector<Ridge> ridges;
    for (int k = 0; k < 4; ++k) ridges.push_back({7.0 + 5.0 * unit(rng), std::numbers::pi * unit(rng), kTwoPi * unit(rng)});

    RasterEnv env;
    env.extent = spec.extent;
    env.obs_noise_std = spec.obs_noise_std;
    env.values.resize(spec.rows, spec.cols);
    for (int r = 0; r < spec.rows; ++r) {
        const double v = 1.0 - static_cast<double>(r) / (spec.rows - 1);  // north-up
        for (int c = 0; c < spec.cols; ++c) {
            const double u = static_cast<double>(c) / (spec.cols - 1);
            double z = 0.0;
            if (u < kFlatEdge) {
                z = 5.0 + 2.0 * u + 0.5 * v;
            } else {
                z = 15.0;
                for (const auto& b : bumps) {
                    const double d2 = (u - b.cu) * (u - b.cu) + (v - b.cv) * (v - b.cv);
                    z += b.height * std::exp(-d2 / (2.0 * b.width * b.width));
                }
                double rough = 0.0;
                for (const auto& rd : ridges) {
                    rough += std::sin(kTwoPi * rd.freq * (std::cos(rd.dir) * u + std::sin(rd.dir) * v) + rd.phase);
                }
                const double weight = 1.0 / (1.0 + std::exp(-(u - kRockyEdge) / 0.015));
                z += 3.0 * weight * rough;
            }
            env.values(r, c) = z;
        }
    }
    return env;
}

RasterEnv stationary_raster(const SyntheticRasterSpec& spec) {
    constexpr int kFeatures = 256;
    constexpr double kLengthscale = 0.15;
    constexpr double kAmplitude = 10.0;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0 / kLengthscale);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    Eigen::Matrix<double, kFeatures, 2> omega;
    Eigen::Matrix<double, kFeatures, 1> offset;
    for (int k = 0; k < kFeatures; ++k) {
        omega(k, 0) = normal(rng);
        omega(k, 1) = normal(rng);
        offset(k) = phase(rng);
    }
    const double scale = kAmplitude * std::sqrt(2.0 / kFeatures);

    RasterEnv env;
    env.extent = spec.extent;
    env.obs_noise_std = spec.obs_noise_std;
    env.values.resize(spec.rows, spec.cols);
    for (int r = 0; r < spec.rows; ++r) {
        const double v = 1.0 - static_cast<double>(r) / (spec.rows - 1);
        for (int c = 0; c < spec.cols; ++c) {
            const double u = static_cast<double>(c) / (spec.cols - 1);
            const auto arg = (omega.col(0) * u + omega.col(1) * v + offset).array();
            env.values(r, c) = 50.0 + scale * arg.cos().sum();
        }
    }
    return env;
}

}  // namespace

RasterEnv make_synthetic_raster(const SyntheticRasterSpec& spec) {
    if (spec.rows < 2 || spec.cols < 2) throw DomainError("synthetic raster needs at least 2x2 cells");
    RasterEnv env;
    if (spec.generator == "nonstationary") {
        env = nonstationary_raster(spec);
    } else if (spec.generator == "stationary") {
        env = stationary_raster(spec);
    } else {
        throw ParseError("unknown raster generator '" + spec.generator + "'");
    }
    env.validate();
    return env;
}

// ---------------------------------------------------------------------------

Bounds bounds(const Environment& env) {
    if (const auto* raster = std::get_if<RasterEnv>(&env)) return raster->bounds();
    return Bounds{Vector::Zero(1), Vector::Ones(1)};
}

Vector truth(const Environment& env, const Matrix& locations) {
    if (const auto* raster = std::get_if<RasterEnv>(&env)) return query_truth(*raster, locations);
    const auto& synth = std::get<Synthetic1D>(env);
    require_cols(locations, 1, "truth");
    Vector out(locations.rows());
    for (Eigen::Index i = 0; i < locations.rows(); ++i) out(i) = synth_eval(synth, locations(i, 0));
    return out;
}

Vector observe(const Environment& env, const Matrix& locations, std::mt19937_64& rng) {
    Vector y = truth(env, locations);
    const double noise = std::visit([](const auto& e) { return e.obs_noise_std; }, env);
    if (noise > 0.0) {
        std::normal_distribution<double> dist(0.0, noise);
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += dist(rng);
    }
    return y;
}

}  // namespace akgp::env
