#ifndef AKGP_ENVIRONMENTS_HPP
#define AKGP_ENVIRONMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <variant>

#include "akgp/common.hpp"

namespace akgp::env {

struct Extent {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    [[nodiscard]] Bounds bounds() const;
};

/// Elevation grid. Row 0 is the northern edge (y_max), column 0 the western
/// edge (x_min); grid nodes sit on the extent boundary.
struct RasterEnv {
    Matrix values;
    Extent extent;
    double obs_noise_std = 1.0;

    void validate() const;
    [[nodiscard]] Bounds bounds() const { return extent.bounds(); }
};

/// Text raster: `rows cols x_min x_max y_min y_max` then `rows` lines of
/// `cols` values, row-major, north-up.
RasterEnv parse_raster(std::istream& in, const std::string& source = "<stream>");
RasterEnv load_raster(const std::filesystem::path& path, double obs_noise_std = 1.0);
void write_raster(std::ostream& out, const RasterEnv& env);
void save_raster(const std::filesystem::path& path, const RasterEnv& env);

/// Bilinear lookup. Locations outside the extent are clamped onto it with a warning.
double query_truth(const RasterEnv& env, const Vector& location);
Vector query_truth(const RasterEnv& env, const Matrix& locations);

enum class Synthetic1DId { FivePartition, XSin40X4 };

/// One-dimensional reference functions on [0, 1].
///
/// FivePartition has partitions split at 0.2, 0.4, 0.6, 0.8 with a jump at
/// every split; partition #3 oscillates quickly, the rest vary slowly:
///   [0.0, 0.2)  0.6 + 0.4 sin(2 pi x / 0.4)
///   [0.2, 0.4) -0.5 + 0.3 cos(pi (x - 0.2) / 0.2)
///   [0.4, 0.6)  0.1 + 0.5 sin(2 pi (x - 0.4) / 0.05)
///   [0.6, 0.8)  1.0 - 1.5 (x - 0.6)
///   [0.8, 1.0] -0.3 + 0.3 sin(pi (x - 0.8) / 0.2)
///
/// XSin40X4 is x sin(40 x^4).
struct Synthetic1D {
    Synthetic1DId id = Synthetic1DId::FivePartition;
    double obs_noise_std = 0.05;
};

double synth_eval(const Synthetic1D& env, double x);
Synthetic1DId parse_synthetic_id(const std::string& name);
std::string to_string(Synthetic1DId id);

struct SyntheticRasterSpec {
    /// "nonstationary": flat plain in the west, a cliff into smooth hills,
    /// and a rocky high-frequency region in the east.
    /// "stationary": a draw from an RBF Gaussian process (random features).
    std::string generator = "nonstationary";
    int rows = 100;
    int cols = 100;
    Extent extent{0.0, 100.0, 0.0, 100.0};
    std::uint64_t seed = 0;
    double obs_noise_std = 1.0;
};

RasterEnv make_synthetic_raster(const SyntheticRasterSpec& spec);

/// Region of the "nonstationary" generator a location falls in, from its
/// west-to-east position u in [0, 1]: flat below 0.35, rocky from 0.65.
enum class TerrainRegion { Flat, Hills, Rocky };
TerrainRegion terrain_region(const Extent& extent, double x);

/// Anything the experiment loop can sample from.
using Environment = std::variant<RasterEnv, Synthetic1D>;

Bounds bounds(const Environment& env);
Vector truth(const Environment& env, const Matrix& locations);
/// truth + i.i.d. N(0, obs_noise_std^2) noise.
Vector observe(const Environment& env, const Matrix& locations, std::mt19937_64& rng);

}  // namespace akgp::env

#endif  // AKGP_ENVIRONMENTS_HPP
