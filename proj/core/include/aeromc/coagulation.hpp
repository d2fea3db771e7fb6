#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "aeromc/aero_state.hpp"
#include "aeromc/environment.hpp"
#include "aeromc/species.hpp"

namespace aeromc {

/// K = value for every pair (m^3 s^-1).
struct ConstantKernel {
  double value = 0.0;
  bool operator==(const ConstantKernel&) const = default;
};

/// K = coefficient * (m1 + m2), coefficient in m^3 s^-1 kg^-1.
struct AdditiveKernel {
  double coefficient = 0.0;
  bool operator==(const AdditiveKernel&) const = default;
};

/// Brownian coagulation in the Fuchs transition-regime form.
struct BrownianKernel {
  bool operator==(const BrownianKernel&) const = default;
};

using Kernel = std::variant<ConstantKernel, AdditiveKernel, BrownianKernel>;

/// Throws SemanticError for non-positive kernel parameters.
void validate_kernel(const Kernel& kernel);

/// Kernel for two particles of (volume-equivalent) diameter d (m) and total
/// mass m (kg). Symmetric in its two particles.
double kernel_value(const Kernel& kernel, double d1, double m1, double d2, double m2,
                    const EnvState& env);
double kernel_value(const Kernel& kernel, const AeroParticle& p1, const AeroParticle& p2,
                    const EnvState& env, const SpeciesDatabase& db);

namespace brownian {

double air_viscosity(double temperature);
double mean_free_path(double temperature, double pressure);
double slip_correction(double diameter, double temperature, double pressure);
double diffusivity(double diameter, double temperature, double pressure);

}  // namespace brownian

/// Logarithmically spaced diameter bins used to sort particles for
/// majorant-based pair sampling.
class BinGrid {
 public:
  /// Throws SemanticError unless 0 < d_min < d_max and n_bins >= 1.
  static BinGrid log_spaced(double d_min, double d_max, std::size_t n_bins);
  /// Throws SemanticError unless edges are positive and strictly increasing.
  explicit BinGrid(std::vector<double> edges);

  std::size_t n_bins() const noexcept { return edges_.size() - 1; }
  const std::vector<double>& edges() const noexcept { return edges_; }
  /// Bin holding the diameter, or nullopt outside [front, back).
  std::optional<std::size_t> bin_of(double diameter) const;

  bool operator==(const BinGrid&) const = default;

 private:
  std::vector<double> edges_;
};

struct CoagEvent {
  ParticleId first_id = 0;
  ParticleId second_id = 0;
  ParticleId merged_id = 0;
  double time = 0.0;

  bool operator==(const CoagEvent&) const = default;
};

/// Removes particles i and j and adds one particle with the summed composition.
/// Returns the id of the merged particle. Throws NotFoundError if either id is
/// missing and DomainError if i == j.
ParticleId apply_coag_event(AeroState& state, ParticleId i, ParticleId j);

/// Stochastic accept-reject coagulation over a binned population.
///
/// Majorants are computed per bin pair from the kernel at the bin-edge
/// diameters (for both the lightest and the densest species density) times a
/// safety factor of 2, and cached until temperature or pressure change.
class Coagulator {
 public:
  static constexpr double majorant_safety = 2.0;

  Coagulator(Kernel kernel, BinGrid grid, SpeciesDatabase db);

  /// Advances coagulation by dt. Returns the accepted events in application
  /// order; `time` is stamped with env.elapsed_time. Throws ConfigError if a
  /// particle falls outside the bin grid and DomainError if dt < 0.
  std::vector<CoagEvent> step(AeroState& state, const EnvState& env, double dt);

  /// Majorant of bin pair (a, b) for the given environment.
  double majorant(std::size_t a, std::size_t b, const EnvState& env);

  const Kernel& kernel() const noexcept { return kernel_; }
  const BinGrid& grid() const noexcept { return grid_; }
  /// Number of accepted candidates whose kernel exceeded the majorant.
  std::size_t majorant_violations() const noexcept { return violations_; }

 private:
  void refresh_majorants(const EnvState& env);

  Kernel kernel_;
  BinGrid grid_;
  SpeciesDatabase db_;
  std::vector<double> majorants_;
  std::optional<std::pair<double, double>> cached_env_;
  std::size_t violations_ = 0;
};

/// One-shot convenience wrapper around Coagulator::step.
std::vector<CoagEvent> coag_step(AeroState& state, const Kernel& kernel, const EnvState& env,
                                 const BinGrid& grid, const SpeciesDatabase& db, double dt);

}  // namespace aeromc
