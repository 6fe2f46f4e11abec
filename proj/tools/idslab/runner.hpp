#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace idslab::app {

enum class ExitCode : int { Pass = 0, Error = 1, DiagnosticFailure = 2 };

struct Check {
  std::string status;  // pass, fail, warn
  std::string detail;
};

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // --out
  std::optional<unsigned> workers;               // --workers
};

struct RunOutcome {
  ExitCode exit_code = ExitCode::Pass;
  std::filesystem::path dir;
  std::vector<std::string> files;
  std::map<std::string, Check> checks;
  std::string status;  // overall pass/fail/warn
  std::vector<std::string> warnings;
  std::string error;
};

/// --out, then $IDSLAB_OUT, then output.dir from the config.
std::filesystem::path resolve_output_dir(const ExperimentConfig& c, const std::optional<std::filesystem::path>& cli);

/// Runs the configured experiment and writes results.csv (long format), any table CSVs,
/// summary.json and, last, manifest.json. Errors during the run leave error.json and no manifest.
RunOutcome run_experiment(const ExperimentConfig& c, const RunOptions& options);

/// Energies for an experiment: pilot grid from realization 0, uniform, or explicit list.
std::vector<double> resolve_energies(const ExperimentConfig& c, const BoxSpec& pilot_box);

std::string box_label(const BoxSpec& box);

}  // namespace idslab::app
