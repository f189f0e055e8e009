#ifndef AKGP_EXPORT_HPP
#define AKGP_EXPORT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "akgp/harness.hpp"
#include "akgp/suites.hpp"

namespace akgp::io {

inline constexpr const char* kMetricsHeader = "seed,num_samples,smse,msll,nlpd,rmse,mae,wall_time_s";

/// `{env}__{kernel}__{strategy}`
std::string experiment_stem(const harness::ExperimentResult& result);

/// Per-seed learning curves, one row per evaluation. Failed seeds contribute no rows.
std::filesystem::path write_experiment_csv(const std::filesystem::path& dir, const harness::ExperimentResult& result);

/// Mean and population std over seeds of the curve-averaged metrics, one row per experiment.
std::filesystem::path write_summary_csv(const std::filesystem::path& dir,
                                        const std::vector<harness::ExperimentResult>& results,
                                        const std::string& name = "summary.csv");

/// Final prediction maps of every seed that recorded them.
/// Rebuilds summary.csv from every `{env}__{kernel}__{strategy}.csv` in `dir`.
std::filesystem::path summarize_directory(const std::filesystem::path& dir);

std::vector<std::filesystem::path> write_maps_csv(const std::filesystem::path& dir,
                                                  const harness::ExperimentResult& result);

std::filesystem::path write_sweep_csv(const std::filesystem::path& dir, const std::vector<suites::SweepRow>& rows);
std::filesystem::path write_overfit_csv(const std::filesystem::path& dir, const std::vector<suites::OverfitRow>& rows);

struct MetricsRow {
    std::uint64_t seed = 0;
    metrics::MetricsRecord record;
};

/// Reads a file written by write_experiment_csv. Throws ParseError on malformed input.
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);

/// Generic CSV: header names plus rows of raw cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace akgp::io

#endif  // AKGP_EXPORT_HPP
