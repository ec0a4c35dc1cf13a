#pragma once

#include "sigdet/simgen.hpp"

#include <string>
#include <vector>

namespace sigdet {

/// A scenario plus the effect grid it is run over.
struct ExperimentConfig {
  ScenarioConfig scenario;
  std::vector<double> effects;
};

/// Parses the YAML experiment schema (see docs/config.md). Errors carry the
/// source name, line and field: ConfigError.
ExperimentConfig parse_experiment(const std::string& yaml_text, const std::string& source = "<config>");
ExperimentConfig load_experiment_file(const std::string& path);

/// Canonical YAML for a config; parse_experiment(to_yaml(c)) reproduces c.
std::string to_yaml(const ExperimentConfig& config);

const std::vector<std::string>& preset_names();
/// Embedded YAML text of a preset. Throws ConfigError for unknown names.
const std::string& preset_yaml(const std::string& name);

/// A path to an existing file is loaded; otherwise the argument must name a
/// preset. The error for neither lists the valid presets.
ExperimentConfig resolve_experiment(const std::string& config_or_preset, std::string* yaml_text = nullptr);

}  // namespace sigdet
