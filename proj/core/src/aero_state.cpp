#include "aeromc/aero_state.hpp"

#include <cmath>
#include <string>

#include "aeromc/error.hpp"

namespace aeromc {

AeroState::AeroState(double comp_volume, std::uint64_t seed) : comp_volume_(comp_volume), rng_(seed) {
  if (!(comp_volume > 0.0) || !std::isfinite(comp_volume))
    throw DomainError("computational volume must be > 0");
}

void AeroState::set_comp_volume(double comp_volume) {
  if (!(comp_volume > 0.0) || !std::isfinite(comp_volume))
    throw DomainError("computational volume must be > 0");
  comp_volume_ = comp_volume;
}

ParticleId AeroState::add(std::vector<double> masses) {
  const ParticleId id = next_id_++;
  index_.emplace(id, particles_.size());
  particles_.push_back(AeroParticle{std::move(masses), id});
  return id;
}

ParticleId AeroState::add_validated(std::vector<double> masses, const SpeciesDatabase& db) {
  validate_particle(masses, db);
  return add(std::move(masses));
}

void AeroState::remove(ParticleId id) {
  auto it = index_.find(id);
  if (it == index_.end()) throw NotFoundError("no particle with id " + std::to_string(id));
  const std::size_t slot = it->second;
  index_.erase(it);
  if (slot + 1 != particles_.size()) {
    particles_[slot] = std::move(particles_.back());
    index_[particles_[slot].id] = slot;
  }
  particles_.pop_back();
}

const AeroParticle& AeroState::get(ParticleId id) const { return particles_[index_of(id)]; }

std::size_t AeroState::index_of(ParticleId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw NotFoundError("no particle with id " + std::to_string(id));
  return it->second;
}

std::span<double> AeroState::masses(ParticleId id) { return particles_[index_of(id)].masses; }

void AeroState::clear() {
  particles_.clear();
  index_.clear();
}

bool AeroState::operator==(const AeroState& other) const {
  return particles_ == other.particles_ && comp_volume_ == other.comp_volume_ &&
         next_id_ == other.next_id_ && rng_ == other.rng_;
}

void state_rebalance(AeroState& state, std::size_t n_low, std::size_t n_high) {
  if (n_low == 0 || n_low >= n_high) throw DomainError("rebalance requires 0 < n_low < n_high");
  if (state.empty()) return;

  while (state.size() < n_low) {
    const std::size_t n = state.size();
    state.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) state.add(state[i].masses);
    state.set_comp_volume(2.0 * state.comp_volume());
  }

  std::bernoulli_distribution keep(0.5);
  while (state.size() > n_high) {
    std::vector<ParticleId> drop;
    for (const auto& p : state.particles()) {
      if (!keep(state.rng())) drop.push_back(p.id);
    }
    for (auto id : drop) state.remove(id);
    state.set_comp_volume(0.5 * state.comp_volume());
    if (state.empty()) break;
  }
}

std::vector<double> species_mass_totals(const AeroState& state, std::size_t n_species) {
  std::vector<double> totals(n_species, 0.0);
  for (const auto& p : state.particles()) {
    for (std::size_t i = 0; i < n_species && i < p.masses.size(); ++i) totals[i] += p.masses[i];
  }
  return totals;
}

}  // namespace aeromc
