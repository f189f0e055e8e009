#include "akgp/export.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "akgp/common.hpp"

namespace akgp::io {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd r;
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    for (double x : xs) r.std += (x - r.mean) * (x - r.mean);
    r.std = std::sqrt(r.std / static_cast<double>(xs.size()));
    return r;
}

}  // namespace

std::string experiment_stem(const harness::ExperimentResult& result) {
    return result.env + "__" + result.kernel + "__" + result.strategy;
}

fs::path write_experiment_csv(const fs::path& dir, const harness::ExperimentResult& result) {
    const fs::path path = dir / (experiment_stem(result) + ".csv");
    std::ofstream out = open_out(path);
    out << kMetricsHeader << '\n';
    for (const auto& run : result.runs) {
        if (!run.ok) continue;
        for (const auto& r : run.curve) {
            out << run.seed << ',' << r.num_samples << ',' << format_double(r.smse) << ',' << format_double(r.msll)
                << ',' << format_double(r.nlpd) << ',' << format_double(r.rmse) << ',' << format_double(r.mae) << ','
                << format_double(r.wall_time_s) << '\n';
        }
    }
    return path;
}

fs::path write_summary_csv(const fs::path& dir, const std::vector<harness::ExperimentResult>& results,
                           const std::string& name) {
    const fs::path path = dir / name;
    std::ofstream out = open_out(path);
    out << "env,kernel,strategy,num_seeds,num_failed,smse_mean,smse_std,msll_mean,msll_std,nlpd_mean,nlpd_std,"
           "rmse_mean,rmse_std,mae_mean,mae_std\n";
    for (const auto& result : results) {
        std::vector<double> smse, msll, nlpd, rmse, mae;
        int failed = 0;
        for (const auto& run : result.runs) {
            if (!run.ok || run.curve.empty()) {
                ++failed;
                continue;
            }
            const metrics::MetricsRecord a = metrics::curve_average(run.curve);
            smse.push_back(a.smse);
            msll.push_back(a.msll);
            nlpd.push_back(a.nlpd);
            rmse.push_back(a.rmse);
            mae.push_back(a.mae);
        }
        out << result.env << ',' << result.kernel << ',' << result.strategy << ',' << result.runs.size() << ','
            << failed;
        for (const auto* xs : {&smse, &msll, &nlpd, &rmse, &mae}) {
            const MeanStd m = mean_std(*xs);
            out << ',' << format_double(m.mean) << ',' << format_double(m.std);
        }
        out << '\n';
    }
    return path;
}

fs::path summarize_directory(const fs::path& dir) {
    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string stem = entry.path().stem().string();
        if (entry.path().extension() != ".csv") continue;
        const auto first = stem.find("__");
        const auto second = first == std::string::npos ? first : stem.find("__", first + 2);
        if (second == std::string::npos || stem.find("__", second + 2) != std::string::npos) continue;
        inputs.push_back(entry.path());
    }
    std::sort(inputs.begin(), inputs.end());

    std::vector<harness::ExperimentResult> results;
    for (const auto& path : inputs) {
        const std::string stem = path.stem().string();
        const auto first = stem.find("__");
        const auto second = stem.find("__", first + 2);
        harness::ExperimentResult r{stem.substr(0, first), stem.substr(first + 2, second - first - 2),
                                    stem.substr(second + 2), {}};
        for (const auto& row : read_metrics_csv(path)) {
            if (r.runs.empty() || r.runs.back().seed != row.seed) {
                r.runs.emplace_back();
                r.runs.back().seed = row.seed;
            }
            r.runs.back().curve.push_back(row.record);
        }
        results.push_back(std::move(r));
    }
    return write_summary_csv(dir, results);
}

std::vector<fs::path> write_maps_csv(const fs::path& dir, const harness::ExperimentResult& result) {
    std::vector<fs::path> paths;
    for (const auto& run : result.runs) {
        if (!run.ok || !run.maps) continue;
        const harness::PredictionMaps& m = *run.maps;
        const fs::path path = dir / (experiment_stem(result) + "__maps_seed" + std::to_string(run.seed) + ".csv");
        std::ofstream out = open_out(path);
        const Eigen::Index d = m.locations.cols();
        for (Eigen::Index j = 0; j < d; ++j) out << (j == 0 ? "x" : j == 1 ? ",y" : ",x" + std::to_string(j));
        out << ",truth,mean,stddev";
        for (Eigen::Index k = 0; k < m.weights.cols(); ++k) out << ",w" << k;
        for (Eigen::Index k = 0; k < m.memberships.cols(); ++k) out << ",z" << k;
        out << '\n';
        for (Eigen::Index i = 0; i < m.locations.rows(); ++i) {
            for (Eigen::Index j = 0; j < d; ++j) out << (j > 0 ? "," : "") << format_double(m.locations(i, j));
            out << ',' << format_double(m.truth(i)) << ',' << format_double(m.mean(i)) << ','
                << format_double(m.stddev(i));
            for (Eigen::Index k = 0; k < m.weights.cols(); ++k) out << ',' << format_double(m.weights(i, k));
            for (Eigen::Index k = 0; k < m.memberships.cols(); ++k) out << ',' << format_double(m.memberships(i, k));
            out << '\n';
        }
        paths.push_back(path);

        const fs::path samples = dir / (experiment_stem(result) + "__samples_seed" + std::to_string(run.seed) + ".csv");
        std::ofstream s = open_out(samples);
        s << (d == 1 ? "x" : "x,y") << '\n';
        for (Eigen::Index i = 0; i < m.samples.rows(); ++i) {
            for (Eigen::Index j = 0; j < d; ++j) s << (j > 0 ? "," : "") << format_double(m.samples(i, j));
            s << '\n';
        }
        if (m.lengthscales.size() > 0) {
            const fs::path ls = dir / (experiment_stem(result) + "__lengthscales.csv");
            std::ofstream l = open_out(ls);
            l << "index,lengthscale\n";
            for (Eigen::Index k = 0; k < m.lengthscales.size(); ++k) {
                l << k << ',' << format_double(m.lengthscales(k)) << '\n';
            }
        }
    }
    return paths;
}

fs::path write_sweep_csv(const fs::path& dir, const std::vector<suites::SweepRow>& rows) {
    const fs::path path = dir / "sensitivity.csv";
    std::ofstream out = open_out(path);
    out << "factor,value,seed,ok,smse,msll,nlpd,rmse,mae\n";
    for (const auto& r : rows) {
        out << r.factor << ',' << r.value << ',' << r.seed << ',' << (r.ok ? 1 : 0) << ','
            << format_double(r.summary.smse) << ',' << format_double(r.summary.msll) << ','
            << format_double(r.summary.nlpd) << ',' << format_double(r.summary.rmse) << ','
            << format_double(r.summary.mae) << '\n';
    }
    return path;
}

fs::path write_overfit_csv(const fs::path& dir, const std::vector<suites::OverfitRow>& rows) {
    const fs::path path = dir / "overfitting.csv";
    std::ofstream out = open_out(path);
    out << "kernel,seed,iteration,lml,train_msll,test_msll\n";
    for (const auto& r : rows) {
        out << r.kernel << ',' << r.seed << ',' << r.iteration << ',' << format_double(r.lml) << ','
            << format_double(r.train_msll) << ',' << format_double(r.test_msll) << '\n';
    }
    return path;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw ParseError("missing CSV column '" + name + "'");
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
    t.header = split(line);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.header.size()) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(t.header.size()) + " fields, got " + std::to_string(cells.size()));
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

std::vector<MetricsRow> read_metrics_csv(const fs::path& path) {
    const CsvTable t = read_csv(path);
    if (t.header != split(kMetricsHeader)) throw ParseError(path.string() + ": unexpected header");
    std::vector<MetricsRow> rows;
    for (const auto& c : t.rows) {
        MetricsRow r;
        try {
            r.seed = std::stoull(c[0]);
            r.record.num_samples = std::stol(c[1]);
        } catch (const std::exception&) {
            throw ParseError(path.string() + ": bad integer field");
        }
        r.record.smse = parse_double(c[2]);
        r.record.msll = parse_double(c[3]);
        r.record.nlpd = parse_double(c[4]);
        r.record.rmse = parse_double(c[5]);
        r.record.mae = parse_double(c[6]);
        r.record.wall_time_s = parse_double(c[7]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace akgp::io
