#include "aeromc/aero_dist.hpp"

#include <cmath>
#include <random>

#include "aeromc/constants.hpp"
#include "aeromc/error.hpp"
#include "aeromc/particle.hpp"

namespace aeromc {

AeroMode::AeroMode(std::string name, ModeType type, double num_conc, double geom_mean_diam,
                   double geom_std_dev, std::map<std::string, double> mass_fracs)
    : name_(std::move(name)),
      type_(type),
      num_conc_(num_conc),
      geom_mean_diam_(geom_mean_diam),
      geom_std_dev_(geom_std_dev),
      mass_fracs_(std::move(mass_fracs)) {
  if (!(num_conc_ >= 0.0) || !std::isfinite(num_conc_))
    throw SemanticError("num_conc", "number concentration must be >= 0");
  if (!(geom_mean_diam_ > 0.0) || !std::isfinite(geom_mean_diam_))
    throw SemanticError("geom_mean_diam", "geometric mean diameter must be > 0");
  if (type_ == ModeType::log_normal && !(geom_std_dev_ > 1.0 && std::isfinite(geom_std_dev_)))
    throw SemanticError("geom_std_dev", "geometric standard deviation must be > 1 for log_normal");
  if (mass_fracs_.empty()) throw SemanticError("mass_fracs", "at least one mass fraction is required");
  double sum = 0.0;
  for (const auto& [species, f] : mass_fracs_) {
    if (!(f >= 0.0) || !std::isfinite(f))
      throw SemanticError("mass_fracs." + species, "mass fraction must be >= 0");
    sum += f;
  }
  if (!(sum > 0.0)) throw SemanticError("mass_fracs", "mass fractions sum to zero");
  // Already-normalized input is kept bit-for-bit so that documents round-trip.
  if (std::abs(sum - 1.0) > 1e-12) {
    for (auto& [species, f] : mass_fracs_) f /= sum;
  }
}

AeroMode AeroMode::with_num_conc(double num_conc) const {
  AeroMode copy = *this;
  if (!(num_conc >= 0.0) || !std::isfinite(num_conc))
    throw SemanticError("num_conc", "number concentration must be >= 0");
  copy.num_conc_ = num_conc;
  return copy;
}

std::vector<double> AeroMode::fraction_vector(const SpeciesDatabase& db) const {
  std::vector<double> fracs(db.size(), 0.0);
  for (const auto& [species, f] : mass_fracs_) {
    auto i = db.find(species);
    if (!i) {
      throw SchemaError("mass_fracs." + species,
                        "species '" + species + "' is not in the species database");
    }
    fracs[*i] = f;
  }
  return fracs;
}

double AeroDist::total_num_conc() const {
  double n = 0.0;
  for (const auto& m : modes) n += m.num_conc();
  return n;
}

double mode_pdf(const AeroMode& mode, double diameter) {
  if (mode.type() == ModeType::mono)
    throw UnsupportedError("pdf is not defined for mono mode '" + mode.name() + "'");
  if (!(diameter > 0.0)) throw DomainError("diameter must be > 0");
  const double log_sigma = std::log10(mode.geom_std_dev());
  const double z = (std::log10(diameter) - std::log10(mode.geom_mean_diam())) / log_sigma;
  return mode.num_conc() / (std::sqrt(2.0 * constants::pi) * log_sigma) * std::exp(-0.5 * z * z);
}

std::vector<double> composition_for_diameter(double diameter, const std::vector<double>& fractions,
                                             const SpeciesDatabase& db) {
  double specific_volume = 0.0;  // m^3 per kg of particle
  for (std::size_t i = 0; i < db.size(); ++i) specific_volume += fractions[i] / db[i].density;
  const double total = diameter_to_volume(diameter) / specific_volume;
  std::vector<double> masses(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) masses[i] = fractions[i] * total;
  return masses;
}

std::vector<ParticleId> dist_sample(AeroState& state, const AeroDist& dist, const SpeciesDatabase& db,
                                    const SampleOptions& options) {
  std::vector<ParticleId> added;
  for (const auto& mode : dist.modes) {
    const auto fracs = mode.fraction_vector(db);
    const double mean = mode.num_conc() * state.comp_volume() * options.scale;
    if (!(mean > 0.0)) continue;

    std::size_t count = 0;
    if (options.counts == CountSampling::poisson) {
      std::poisson_distribution<std::uint64_t> poisson(mean);
      count = poisson(state.rng());
    } else {
      count = static_cast<std::size_t>(std::llround(mean));
    }

    const bool mono = mode.type() == ModeType::mono;
    std::normal_distribution<double> log_diameter(std::log(mode.geom_mean_diam()),
                                                  mono ? 1.0 : std::log(mode.geom_std_dev()));
    for (std::size_t k = 0; k < count; ++k) {
      const double d = mono ? mode.geom_mean_diam() : std::exp(log_diameter(state.rng()));
      auto masses = composition_for_diameter(d, fracs, db);
      validate_particle(masses, db);
      added.push_back(state.add(std::move(masses)));
    }
  }
  return added;
}

}  // namespace aeromc
