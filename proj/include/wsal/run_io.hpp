#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wsal/dataset.hpp"
#include "wsal/harness.hpp"

namespace wsal {

inline constexpr const char* kVersion = "0.3.0";

/// Flat key=value run configuration. Blank lines and lines starting with '#'
/// are ignored. Relative paths are resolved against the config file's directory.
struct RunConfig {
    ExperimentConfig experiment;
    std::filesystem::path dataset_path;
    std::string label_column = "label";
    std::filesystem::path out_dir;
    /// Row name in reports; defaults to the dataset file stem.
    std::string dataset_name;
    /// Optional pocket manifest whose ids are kept out of the initial labeled set.
    std::filesystem::path init_exclude_path;
};

/// Every recognised key, in canonical order.
const std::vector<std::string_view>& config_keys();

/// Throws ErrorKind::Config naming the offending key or line.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Canonical key=value rendering with every key present; parse_config of the
/// output reproduces the same run.
std::string format_config(const RunConfig& cfg);

/// One JSON object per line: trial, round, labeled_count, holdout_accuracy, selected_ids.
std::string format_records(const std::vector<RoundRecord>& records);

/// Writes records.jsonl, summary.json, timings.tsv, labels.json, run.cfg and manifest.json into out_dir.
/// Every file except timings.tsv and manifest.json is a pure function of (config, dataset).
void write_run(const RunConfig& cfg, const Dataset& ds, const ExperimentResult& result,
               std::string_view started_at, std::string_view finished_at);

struct RunSummary {
    std::string dataset;
    std::string strategy;
    std::size_t trials = 0;
    double mean = 0.0;
    double std = 0.0;
};

RunSummary load_summary(const std::filesystem::path& summary_json);

enum class ReportFormat { Markdown, Csv };

/// Dataset x strategy table of final hold-out accuracy as "NN.NN ± N.NN" percent.
/// Reads results_dir/summary.json, or every results_dir/*/summary.json.
std::string render_report(const std::filesystem::path& results_dir, ReportFormat format);

/// UTC wall-clock timestamp, ISO 8601.
std::string utc_timestamp();

} // namespace wsal
