#pragma once

#include <span>
#include <string_view>

namespace idslab::app {

struct ExperimentInfo {
  std::string_view name;
  std::string_view description;
  std::string_view anchor;
};

std::span<const ExperimentInfo> experiment_registry();
const ExperimentInfo* find_experiment(std::string_view name);

}  // namespace idslab::app
