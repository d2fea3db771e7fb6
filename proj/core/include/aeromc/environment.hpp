#pragma once

#include <map>
#include <string>

namespace aeromc {

struct EnvState {
  double temperature = 298.15;     // K
  double pressure = 101325.0;      // Pa
  double relative_humidity = 0.0;  // saturation ratio
  double elapsed_time = 0.0;       // s

  bool operator==(const EnvState&) const = default;
};

/// Throws SemanticError for non-physical values.
void validate_env(const EnvState& env);

/// Gas-phase mixing ratios in ppb, keyed by species name.
struct GasState {
  std::map<std::string, double> mixing_ratios;

  double get(const std::string& name) const {
    auto it = mixing_ratios.find(name);
    return it == mixing_ratios.end() ? 0.0 : it->second;
  }

  bool operator==(const GasState&) const = default;
};

}  // namespace aeromc
