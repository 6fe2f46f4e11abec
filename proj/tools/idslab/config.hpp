#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idslab/error.hpp"
#include "idslab/lattice.hpp"
#include "idslab/matrix.hpp"
#include "idslab/potential.hpp"

namespace idslab::app {

struct EnergyGridSpec {
  enum class Kind { Pilot, Uniform, List };
  Kind kind = Kind::Pilot;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t points = 201;
  std::vector<double> values;

  bool operator==(const EnergyGridSpec&) const = default;
};

struct ModelConfig {
  int d = 2;
  std::vector<int> sides;
  double spacing = 1.0;
  std::vector<BoundaryCondition> bcs{BoundaryCondition::Dirichlet};
  RealMatrix field;
  std::optional<int> theta;

  bool operator==(const ModelConfig&) const = default;
};

struct RunConfig {
  EnergyGridSpec energies;
  std::size_t realizations = 1;
  std::uint64_t master_seed = 0;
  unsigned workers = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Experiment-specific knobs; unused ones keep their defaults.
struct Params {
  double window_fraction = 1.0;
  std::vector<int> sweep_sides;
  double smoothing_eps = 0.5;
  std::vector<double> levels;
  std::vector<double> physical_sides;
  std::vector<double> spacings;
  double tolerance = 0.0;  // 0 selects the experiment's default
  double q = 2.0;
  double r = 2.0;
  std::size_t samples = 200;
  int cell_resolution = 4;

  bool operator==(const Params&) const = default;
};

struct ExperimentConfig {
  std::string experiment;
  ModelConfig model;
  EnsembleSpec ensemble;
  RunConfig run;
  std::string output_dir;
  Params params;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Thrown for schema or cross-field problems; the message starts with the offending field.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

/// Parses TOML, or JSON when the file name ends in .json.
nlohmann::json load_config_document(const std::filesystem::path& path);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Cross-field checks. Returns warnings; throws ConfigError on errors.
std::vector<std::string> validate_config(const ExperimentConfig& c);

MagneticField field_of(const ExperimentConfig& c);
BoxSpec box_of(const ExperimentConfig& c, BoundaryCondition bc);

}  // namespace idslab::app
