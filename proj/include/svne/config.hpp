#pragma once

#include <string>

#include "svne/simulate.hpp"

namespace svne {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// key = value configuration with '#' comments and the sections
// [substrate] [workload] [solver] [swarm] [embedding]; strategy and seed are
// global keys. Unknown keys or sections are rejected.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

// Canonical fully-resolved form; parse_config_text(print_config(c)) == c.
// Also serves as the run manifest.
std::string print_config(const ScenarioConfig& config);

}  // namespace svne
