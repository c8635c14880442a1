#pragma once

#include "ququart/io.hpp"
#include "ququart/mappings.hpp"
#include "ququart/recipe.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ququart::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 2, kResourceLimit = 3, kConfigError = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string name;
  std::string model;  // "tV" or "fermi_hubbard"
  ModelParams params;
  LatticeSpec spec;
  MappingKind mapping = MappingKind::SpinlessLocal;
  double tau = 0.05;
  int n_steps = 0;
  StateRecipe initial_state;
  std::string csv;
  std::string json;
  std::string oracle_csv;
  std::string snapshot;  // empty: no snapshot
  std::size_t memory_budget = kDefaultMemoryBudget;
  std::string vvc_layout;  // empty: default layout
  Json echo;
};

/// Applies "a.b.c=value" overrides; the value is read as a YAML scalar or flow
/// collection. Throws ConfigError on a malformed override.
void apply_override(YAML::Node& root, const std::string& assignment);

Json yaml_to_json(const YAML::Node& node);

/// Throws ConfigError on any missing, unknown or invalid entry.
ExperimentConfig parse_config(const YAML::Node& root, const std::string& default_name = "run");
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});

}  // namespace ququart::cli
