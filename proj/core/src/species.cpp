#include "aeromc/species.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aeromc/environment.hpp"
#include "aeromc/error.hpp"

namespace aeromc {

SpeciesDatabase::SpeciesDatabase(std::vector<SpeciesRecord> species) : species_(std::move(species)) {
  for (std::size_t i = 0; i < species_.size(); ++i) {
    const auto& s = species_[i];
    const std::string path = "species[" + std::to_string(i) + "]";
    if (s.name.empty()) throw SemanticError(path + ".name", "species name must be non-empty");
    if (!(s.density > 0.0) || !std::isfinite(s.density))
      throw SemanticError(path + ".density", "density must be > 0");
    if (!(s.kappa >= 0.0) || !std::isfinite(s.kappa))
      throw SemanticError(path + ".kappa", "kappa must be >= 0, got " + std::to_string(s.kappa));
    if (s.is_water && s.kappa != 0.0)
      throw SemanticError(path + ".kappa", "water species must have kappa = 0");
    for (std::size_t j = 0; j < i; ++j) {
      if (species_[j].name == s.name)
        throw SemanticError(path + ".name", "duplicate species name '" + s.name + "'");
    }
    if (s.is_water) {
      if (water_) throw SemanticError(path + ".is_water", "at most one water species is allowed");
      water_ = i;
    }
  }
  if (!species_.empty()) {
    auto [lo, hi] = std::minmax_element(species_.begin(), species_.end(),
                                        [](const auto& a, const auto& b) { return a.density < b.density; });
    min_density_ = lo->density;
    max_density_ = hi->density;
  }
}

std::optional<std::size_t> SpeciesDatabase::find(std::string_view name) const {
  for (std::size_t i = 0; i < species_.size(); ++i) {
    if (species_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t SpeciesDatabase::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw NotFoundError("unknown species '" + std::string(name) + "'");
}

void validate_env(const EnvState& env) {
  if (!(env.temperature > 0.0) || !std::isfinite(env.temperature))
    throw SemanticError("env.temperature", "temperature must be > 0");
  if (!(env.pressure > 0.0) || !std::isfinite(env.pressure))
    throw SemanticError("env.pressure", "pressure must be > 0");
  if (!(env.relative_humidity >= 0.0) || !std::isfinite(env.relative_humidity))
    throw SemanticError("env.rel_humidity", "relative humidity must be >= 0");
}

}  // namespace aeromc
