#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aeromc/species.hpp"

namespace aeromc {

using ParticleId = std::uint64_t;

/// One computational particle: a species-mass vector (kg) aligned with a
/// SpeciesDatabase, plus an id unique within its AeroState.
struct AeroParticle {
  std::vector<double> masses;
  ParticleId id = 0;

  bool operator==(const AeroParticle&) const = default;
};

/// Throws DegenerateParticleError if the composition vector has the wrong
/// length, contains a negative or non-finite mass, or carries no dry mass.
void validate_particle(std::span<const double> masses, const SpeciesDatabase& db);

struct Diameters {
  double dry = 0.0;  // m
  double wet = 0.0;  // m
};

double dry_volume(std::span<const double> masses, const SpeciesDatabase& db);
double wet_volume(std::span<const double> masses, const SpeciesDatabase& db);
double volume_to_diameter(double volume) noexcept;
double diameter_to_volume(double diameter) noexcept;

Diameters particle_diameters(const AeroParticle& particle, const SpeciesDatabase& db);
double wet_diameter(std::span<const double> masses, const SpeciesDatabase& db);
double dry_diameter(std::span<const double> masses, const SpeciesDatabase& db);

/// Diameter of the sphere holding only the given species' volume. Returns 0
/// when the subset has no mass.
double core_diameter(const AeroParticle& particle, const SpeciesDatabase& db,
                     std::span<const std::size_t> core_species);

/// Which species a mass query sums over.
class MassSelector {
 public:
  enum class Kind { all, dry, subset };

  static MassSelector all() { return MassSelector(Kind::all, {}); }
  static MassSelector dry() { return MassSelector(Kind::dry, {}); }
  /// Throws NotFoundError for unknown names.
  static MassSelector of(const SpeciesDatabase& db, const std::vector<std::string>& names);
  static MassSelector of_indices(std::vector<std::size_t> indices) {
    return MassSelector(Kind::subset, std::move(indices));
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  bool selects(std::size_t species, const SpeciesDatabase& db) const;

 private:
  MassSelector(Kind kind, std::vector<std::size_t> indices)
      : kind_(kind), indices_(std::move(indices)) {}
  Kind kind_;
  std::vector<std::size_t> indices_;
};

struct MassSummary {
  double total = 0.0;     // kg, over the selected species
  double fraction = 0.0;  // selected dry mass / particle dry mass
};

/// Water is included in `total` when selected but never counts towards the
/// fraction, which therefore stays in [0, 1].
MassSummary particle_masses(const AeroParticle& particle, const SpeciesDatabase& db,
                            const MassSelector& selector);

double total_mass(std::span<const double> masses) noexcept;

}  // namespace aeromc
