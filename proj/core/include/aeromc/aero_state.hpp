#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "aeromc/particle.hpp"

namespace aeromc {

using Rng = std::mt19937_64;

/// A population of uniformly weighted computational particles. Each particle
/// represents a number concentration of 1 / comp_volume.
///
/// Single-owner mutable; the random stream belongs to the state so that runs
/// are reproducible from (seed, inputs) alone.
class AeroState {
 public:
  /// Throws DomainError unless comp_volume > 0.
  explicit AeroState(double comp_volume, std::uint64_t seed = 0);

  std::size_t size() const noexcept { return particles_.size(); }
  bool empty() const noexcept { return particles_.empty(); }
  const std::vector<AeroParticle>& particles() const noexcept { return particles_; }
  const AeroParticle& operator[](std::size_t i) const { return particles_[i]; }

  double comp_volume() const noexcept { return comp_volume_; }
  void set_comp_volume(double comp_volume);
  double particle_number_conc() const noexcept { return 1.0 / comp_volume_; }
  double number_conc() const noexcept { return static_cast<double>(size()) / comp_volume_; }

  Rng& rng() noexcept { return rng_; }
  ParticleId next_id() const noexcept { return next_id_; }

  /// Adds a particle with a freshly allocated id and returns the id. The
  /// composition is not checked here; use add_validated for untrusted input.
  ParticleId add(std::vector<double> masses);
  ParticleId add_validated(std::vector<double> masses, const SpeciesDatabase& db);
  /// Throws NotFoundError for unknown ids. Removal moves the last particle
  /// into the vacated slot.
  void remove(ParticleId id);

  bool contains(ParticleId id) const { return index_.contains(id); }
  const AeroParticle& get(ParticleId id) const;
  std::size_t index_of(ParticleId id) const;
  /// Mutable access to the composition vector of a particle.
  std::span<double> masses(ParticleId id);

  void clear();
  void reserve(std::size_t n) { particles_.reserve(n); }

  /// Equality of population content, volume, id counter and RNG position.
  bool operator==(const AeroState& other) const;

 private:
  std::vector<AeroParticle> particles_;
  std::unordered_map<ParticleId, std::size_t> index_;
  double comp_volume_;
  Rng rng_;
  ParticleId next_id_ = 1;
};

/// Doubles (duplicates every particle and doubles comp_volume) while the
/// count is below n_low; halves (keeps each particle with probability 1/2
/// and halves comp_volume) while it is above n_high. Empty states are left
/// alone. Throws DomainError unless 0 < n_low < n_high.
void state_rebalance(AeroState& state, std::size_t n_low, std::size_t n_high);

/// Per-species total mass (kg) over all particles.
std::vector<double> species_mass_totals(const AeroState& state, std::size_t n_species);

}  // namespace aeromc
