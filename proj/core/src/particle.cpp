#include "aeromc/particle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aeromc/constants.hpp"
#include "aeromc/error.hpp"

namespace aeromc {

void validate_particle(std::span<const double> masses, const SpeciesDatabase& db) {
  if (masses.size() != db.size()) {
    throw DegenerateParticleError("composition vector has " + std::to_string(masses.size()) +
                                  " entries, species database has " + std::to_string(db.size()));
  }
  bool has_dry = false;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] >= 0.0) || !std::isfinite(masses[i]))
      throw DegenerateParticleError("mass of species '" + db[i].name + "' must be finite and >= 0");
    if (!db[i].is_water && masses[i] > 0.0) has_dry = true;
  }
  if (!has_dry) throw DegenerateParticleError("particle has no dry mass");
}

namespace {

void check_length(std::span<const double> masses, const SpeciesDatabase& db) {
  if (masses.size() != db.size()) {
    throw DegenerateParticleError("composition vector has " + std::to_string(masses.size()) +
                                  " entries, species database has " + std::to_string(db.size()));
  }
}

}  // namespace

double dry_volume(std::span<const double> masses, const SpeciesDatabase& db) {
  check_length(masses, db);
  double v = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!db[i].is_water) v += masses[i] / db[i].density;
  }
  return v;
}

double wet_volume(std::span<const double> masses, const SpeciesDatabase& db) {
  check_length(masses, db);
  double v = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) v += masses[i] / db[i].density;
  return v;
}

double volume_to_diameter(double volume) noexcept {
  return std::cbrt(6.0 * volume / constants::pi);
}

double diameter_to_volume(double diameter) noexcept {
  return constants::pi / 6.0 * diameter * diameter * diameter;
}

double dry_diameter(std::span<const double> masses, const SpeciesDatabase& db) {
  const double v = dry_volume(masses, db);
  if (!(v > 0.0)) throw DegenerateParticleError("particle has no dry mass");
  return volume_to_diameter(v);
}

double wet_diameter(std::span<const double> masses, const SpeciesDatabase& db) {
  const double v = wet_volume(masses, db);
  if (!(v > 0.0)) throw DegenerateParticleError("particle has zero volume");
  return volume_to_diameter(v);
}

Diameters particle_diameters(const AeroParticle& particle, const SpeciesDatabase& db) {
  check_length(particle.masses, db);
  double v_dry = 0.0;
  double v_water = 0.0;
  for (std::size_t i = 0; i < db.size(); ++i) {
    const double v = particle.masses[i] / db[i].density;
    (db[i].is_water ? v_water : v_dry) += v;
  }
  if (!(v_dry > 0.0)) throw DegenerateParticleError("particle has no dry mass");
  const double dry = volume_to_diameter(v_dry);
  const double wet = v_water > 0.0 ? volume_to_diameter(v_dry + v_water) : dry;
  return {dry, std::max(wet, dry)};
}

double core_diameter(const AeroParticle& particle, const SpeciesDatabase& db,
                     std::span<const std::size_t> core_species) {
  check_length(particle.masses, db);
  double v = 0.0;
  for (auto i : core_species) {
    if (i >= db.size()) throw NotFoundError("species index out of range");
    v += particle.masses[i] / db[i].density;
  }
  return v > 0.0 ? volume_to_diameter(v) : 0.0;
}

MassSelector MassSelector::of(const SpeciesDatabase& db, const std::vector<std::string>& names) {
  std::vector<std::size_t> indices;
  indices.reserve(names.size());
  for (const auto& n : names) indices.push_back(db.index_of(n));
  return of_indices(std::move(indices));
}

bool MassSelector::selects(std::size_t species, const SpeciesDatabase& db) const {
  switch (kind_) {
    case Kind::all: return true;
    case Kind::dry: return !db[species].is_water;
    case Kind::subset: return std::find(indices_.begin(), indices_.end(), species) != indices_.end();
  }
  return false;
}

MassSummary particle_masses(const AeroParticle& particle, const SpeciesDatabase& db,
                            const MassSelector& selector) {
  check_length(particle.masses, db);
  for (auto i : selector.indices()) {
    if (i >= db.size()) throw NotFoundError("species index out of range");
  }
  double dry = 0.0;
  double selected = 0.0;
  double selected_dry = 0.0;
  for (std::size_t i = 0; i < db.size(); ++i) {
    const double m = particle.masses[i];
    const bool water = db[i].is_water;
    if (!water) dry += m;
    if (selector.selects(i, db)) {
      selected += m;
      if (!water) selected_dry += m;
    }
  }
  if (!(dry > 0.0)) throw DegenerateParticleError("particle has no dry mass");
  return {selected, std::clamp(selected_dry / dry, 0.0, 1.0)};
}

double total_mass(std::span<const double> masses) noexcept {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

}  // namespace aeromc
