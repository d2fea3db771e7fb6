#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "aeromc/scenario.hpp"

namespace aeromc {

/// Parses and fully validates a JSON scenario document. Errors carry the JSON
/// path of the offending field (e.g. `initial_dist.modes[0].mass_fracs`):
/// SyntaxError for malformed JSON, SchemaError for missing/unknown/mistyped
/// keys and undefined species, SemanticError for constraint violations.
Scenario parse_scenario(std::string_view json_text);

/// Reads and parses a scenario file; I/O failures raise Error naming the path.
Scenario load_scenario_file(const std::filesystem::path& path);

/// JSON document that parses back to an equal Scenario.
std::string serialize_scenario(const Scenario& scenario, int indent = 2);

}  // namespace aeromc
