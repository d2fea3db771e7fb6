#pragma once

#include <map>
#include <string>
#include <vector>

#include "aeromc/aero_state.hpp"
#include "aeromc/species.hpp"

namespace aeromc {

enum class ModeType { log_normal, mono };

/// A source mode: number concentration, size distribution and a fixed
/// per-species mass split shared by all particles it produces.
class AeroMode {
 public:
  AeroMode() = default;
  /// Validates the parameters and normalizes mass_fracs to sum to one.
  /// Throws SemanticError on violation.
  AeroMode(std::string name, ModeType type, double num_conc, double geom_mean_diam,
           double geom_std_dev, std::map<std::string, double> mass_fracs);

  const std::string& name() const noexcept { return name_; }
  ModeType type() const noexcept { return type_; }
  double num_conc() const noexcept { return num_conc_; }
  double geom_mean_diam() const noexcept { return geom_mean_diam_; }
  double geom_std_dev() const noexcept { return geom_std_dev_; }
  const std::map<std::string, double>& mass_fracs() const noexcept { return mass_fracs_; }

  /// Copy with a different number concentration (used for emission rates and
  /// background scaling).
  AeroMode with_num_conc(double num_conc) const;

  /// Mass fractions laid out along the database axis. Throws SchemaError if a
  /// species is missing from db.
  std::vector<double> fraction_vector(const SpeciesDatabase& db) const;

  bool operator==(const AeroMode&) const = default;

 private:
  std::string name_;
  ModeType type_ = ModeType::log_normal;
  double num_conc_ = 0.0;
  double geom_mean_diam_ = 1e-7;
  double geom_std_dev_ = 1.0;
  std::map<std::string, double> mass_fracs_;
};

struct AeroDist {
  std::vector<AeroMode> modes;

  double total_num_conc() const;
  bool operator==(const AeroDist&) const = default;
};

/// Number density per unit log10 diameter (m^-3). Throws UnsupportedError for
/// mono modes and DomainError for diameter <= 0.
double mode_pdf(const AeroMode& mode, double diameter);

enum class CountSampling {
  poisson,  // count ~ Poisson(mean)
  rounded,  // count = round(mean), reproducible totals
};

struct SampleOptions {
  /// Multiplies num_conc * comp_volume to form the expected count; emissions
  /// pass rate * dt here.
  double scale = 1.0;
  CountSampling counts = CountSampling::poisson;
};

/// Draws particles from every mode of `dist` into `state`. Returns the ids of
/// the added particles in insertion order.
///
/// For each particle the dry diameter is drawn first; the composition is then
/// m_i = f_i * M with M = v_dry / sum_i(f_i / rho_i), which reproduces both
/// the drawn diameter and the mode's mass fractions.
std::vector<ParticleId> dist_sample(AeroState& state, const AeroDist& dist,
                                    const SpeciesDatabase& db, const SampleOptions& options = {});

/// Composition vector of a particle of the given volume-equivalent diameter
/// with the given fraction vector.
std::vector<double> composition_for_diameter(double diameter, const std::vector<double>& fractions,
                                             const SpeciesDatabase& db);

}  // namespace aeromc
