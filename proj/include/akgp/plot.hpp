#ifndef AKGP_PLOT_HPP
#define AKGP_PLOT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "akgp/common.hpp"

namespace akgp::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> spread;  // optional symmetric band, same length as y
};

/// Line chart with optional shaded bands.
void write_line_svg(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<Series>& series);

/// Row-major `rows x cols` values rendered north-up as a binary PPM with a
/// blue-to-yellow colormap spanning [min, max] of the finite values.
void write_heatmap_ppm(const std::filesystem::path& path, const Matrix& values);

/// Renders everything recognizable in `dir` (learning curves, prediction
/// maps, overfitting traces) into `dir/plots`. Returns the files written.
std::vector<std::filesystem::path> plot_directory(const std::filesystem::path& dir);

}  // namespace akgp::plot

#endif  // AKGP_PLOT_HPP
