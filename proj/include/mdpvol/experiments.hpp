#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "mdpvol/config.hpp"
#include "mdpvol/report.hpp"

namespace mdpvol {

/// Table and optional JSON summary produced by one experiment.
struct ExperimentOutput {
    ReportTable table;
    std::optional<JsonSummary> summary;
};

/// CSV headers, fixed per experiment.
std::vector<std::string> experiment_header(Experiment e);

/// Runs a table-producing experiment (every tag except acceptance).
ExperimentOutput compute_experiment(Experiment e, const ExperimentConfig& config);

struct RunResult {
    std::vector<std::filesystem::path> files;
    bool passed = true;
};

/// Computes the experiment and writes <out_dir>/<prefix>.csv (and .json when there is a summary).
/// The prefix is config.output or the experiment name. Acceptance writes .json and .txt reports.
/// Throws ConfigError when the config names a different experiment or carries foreign params.
RunResult run_experiment(Experiment e, const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace mdpvol
