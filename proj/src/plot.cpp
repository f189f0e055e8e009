#include "akgp/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <limits>
#include <set>

#include <spdlog/spdlog.h>

#include "akgp/export.hpp"

namespace akgp::plot {

namespace fs = std::filesystem;

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Rgb {
    unsigned char r, g, b;
};

Rgb colormap(double t) {
    static const double stops[][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(t));
    const double f = t - i;
    auto mix = [&](int k) { return static_cast<unsigned char>(stops[i][k] + f * (stops[i + 1][k] - stops[i][k]) + 0.5); };
    return {mix(0), mix(1), mix(2)};
}

std::vector<fs::path> plot_curves(const fs::path& csv, const fs::path& out_dir) {
    const auto rows = io::read_metrics_csv(csv);
    std::map<std::uint64_t, std::vector<metrics::MetricsRecord>> by_seed;
    for (const auto& r : rows) by_seed[r.seed].push_back(r.record);
    std::size_t length = std::numeric_limits<std::size_t>::max();
    for (const auto& [seed, curve] : by_seed) length = std::min(length, curve.size());
    if (by_seed.empty() || length == 0) return {};

    const std::string stem = csv.stem().string();
    std::vector<fs::path> written;
    for (const std::string metric : {"smse", "msll"}) {
        Series s;
        s.label = stem;
        for (std::size_t i = 0; i < length; ++i) {
            double x = 0.0, mean = 0.0, sq = 0.0;
            for (const auto& [seed, curve] : by_seed) {
                const double v = metric == "smse" ? curve[i].smse : curve[i].msll;
                x += static_cast<double>(curve[i].num_samples);
                mean += v;
                sq += v * v;
            }
            const double n = static_cast<double>(by_seed.size());
            mean /= n;
            s.x.push_back(x / n);
            s.y.push_back(mean);
            s.spread.push_back(std::sqrt(std::max(0.0, sq / n - mean * mean)));
        }
        const fs::path path = out_dir / (stem + "__" + metric + ".svg");
        write_line_svg(path, stem, "samples", metric, {s});
        written.push_back(path);
    }
    return written;
}

std::vector<fs::path> plot_maps(const fs::path& csv, const fs::path& out_dir) {
    const io::CsvTable t = io::read_csv(csv);
    const std::string stem = csv.stem().string();
    const bool two_d = std::find(t.header.begin(), t.header.end(), "y") != t.header.end();
    auto column = [&](const std::string& name) {
        const std::size_t c = t.column(name);
        std::vector<double> v;
        v.reserve(t.rows.size());
        for (const auto& row : t.rows) v.push_back(parse_double(row[c]));
        return v;
    };
    const auto xs = column("x");
    const auto truth = column("truth");
    const auto mean = column("mean");
    const auto stddev = column("stddev");
    std::vector<fs::path> written;

    if (!two_d) {
        Series tr{"truth", xs, truth, {}};
        Series mu{"mean", xs, mean, {}};
        for (double s : stddev) mu.spread.push_back(2.0 * s);
        const fs::path path = out_dir / (stem + ".svg");
        write_line_svg(path, stem, "x", "value", {tr, mu});
        written.push_back(path);
        return written;
    }

    const std::size_t cols = std::set<double>(xs.begin(), xs.end()).size();
    if (cols == 0 || t.rows.size() % cols != 0) {
        spdlog::warn("{}: locations do not form a grid, skipping", csv.string());
        return written;
    }
    const auto rows = static_cast<Eigen::Index>(t.rows.size() / cols);
    auto to_image = [&](const std::vector<double>& v) {
        // Stored south-to-north; flip to north-up.
        Matrix img(rows, static_cast<Eigen::Index>(cols));
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(cols); ++j) {
                img(rows - 1 - i, j) = v[static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(j)];
            }
        }
        return img;
    };
    std::vector<double> error(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) error[i] = std::abs(mean[i] - truth[i]);
    const std::pair<const char*, const std::vector<double>*> maps[] = {
        {"truth", &truth}, {"mean", &mean}, {"stddev", &stddev}, {"abs_error", &error}};
    for (const auto& [name, values] : maps) {
        const fs::path path = out_dir / (stem + "__" + name + ".ppm");
        write_heatmap_ppm(path, to_image(*values));
        written.push_back(path);
    }
    return written;
}

std::vector<fs::path> plot_overfitting(const fs::path& csv, const fs::path& out_dir) {
    const io::CsvTable t = io::read_csv(csv);
    const std::size_t kc = t.column("kernel"), ic = t.column("iteration"), trc = t.column("train_msll"),
                      tec = t.column("test_msll");
    // kernel -> iteration -> (sum train, sum test, count)
    std::map<std::string, std::map<int, std::array<double, 3>>> acc;
    for (const auto& row : t.rows) {
        auto& a = acc[row[kc]][std::stoi(row[ic])];
        a[0] += parse_double(row[trc]);
        a[1] += parse_double(row[tec]);
        a[2] += 1.0;
    }
    std::vector<Series> series;
    for (const auto& [kernel, by_iter] : acc) {
        Series train{kernel + " train", {}, {}, {}};
        Series test{kernel + " test", {}, {}, {}};
        for (const auto& [iter, a] : by_iter) {
            train.x.push_back(iter);
            test.x.push_back(iter);
            train.y.push_back(a[0] / a[2]);
            test.y.push_back(a[1] / a[2]);
        }
        series.push_back(std::move(train));
        series.push_back(std::move(test));
    }
    const fs::path path = out_dir / "overfitting.svg";
    write_line_svg(path, "train vs test MSLL", "iteration", "msll", series);
    return {path};
}

}  // namespace

void write_line_svg(const fs::path& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<Series>& series) {
    constexpr double W = 720, H = 440, L = 70, R = 180, T = 40, B = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double sp = s.spread.empty() ? 0.0 : s.spread[i];
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i] - sp);
            y1 = std::max(y1, s.y[i] + sp);
        }
    }
    if (!(x1 >= x0)) x0 = 0, x1 = 1;
    if (!(y1 >= y0)) y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
        << "</text>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
        out << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << tick(xv)
            << "</text>\n";
        out << "<text x=\"" << L - 6 << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
            << "</text>\n";
    }
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape(x_label)
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (T + H - B) / 2 << ")\">" << escape(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        if (!s.spread.empty() && !s.x.empty()) {
            out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i] + s.spread[i])) << ' ';
            for (std::size_t i = s.x.size(); i-- > 0;) out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i] - s.spread[i])) << ' ';
            out << "\"/>\n";
        }
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
        out << "\"/>\n";
        const double ly = T + 16.0 * static_cast<double>(k);
        out << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << W - R + 36 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
}

void write_heatmap_ppm(const fs::path& path, const Matrix& values) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double v = values.data()[i];
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "P6\n" << values.cols() << ' ' << values.rows() << "\n255\n";
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            const double v = values(i, j);
            const Rgb c = std::isfinite(v) ? colormap((v - lo) / span) : Rgb{255, 255, 255};
            out.put(static_cast<char>(c.r)).put(static_cast<char>(c.g)).put(static_cast<char>(c.b));
        }
    }
}

std::vector<fs::path> plot_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    const fs::path out_dir = dir / "plots";
    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") inputs.push_back(entry.path());
    }
    std::sort(inputs.begin(), inputs.end());

    std::vector<fs::path> written;
    for (const auto& csv : inputs) {
        const std::string name = csv.filename().string();
        std::vector<fs::path> out;
        try {
            if (name == "overfitting.csv") {
                out = plot_overfitting(csv, out_dir);
            } else if (name.find("__maps_seed") != std::string::npos) {
                out = plot_maps(csv, out_dir);
            } else if (name.find("__") != std::string::npos && name.find("__samples_seed") == std::string::npos &&
                       !ends_with(name, "__lengthscales.csv")) {
                out = plot_curves(csv, out_dir);
            }
        } catch (const std::exception& e) {
            spdlog::warn("skipping {}: {}", csv.string(), e.what());
        }
        written.insert(written.end(), out.begin(), out.end());
    }
    return written;
}

}  // namespace akgp::plot
