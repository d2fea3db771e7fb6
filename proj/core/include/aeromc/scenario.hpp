#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aeromc/aero_dist.hpp"
#include "aeromc/aero_state.hpp"
#include "aeromc/coagulation.hpp"
#include "aeromc/diagnostics.hpp"
#include "aeromc/environment.hpp"
#include "aeromc/mie.hpp"
#include "aeromc/species.hpp"

namespace aeromc {

/// Aerosol source active over [start, stop). The modes' num_conc is an
/// emission rate in m^-3 s^-1.
struct EmissionEntry {
  AeroDist dist;
  double start = 0.0;  // s
  double stop = 0.0;   // s
  bool operator==(const EmissionEntry&) const = default;
};

struct GasEmission {
  std::string species;
  double rate = 0.0;   // ppb s^-1
  double start = 0.0;  // s
  double stop = 0.0;   // s
  bool operator==(const GasEmission&) const = default;
};

struct DilutionSpec {
  double rate = 0.0;  // s^-1
  AeroDist background_aero;
  GasState background_gas;
  bool operator==(const DilutionSpec&) const = default;
};

struct ProcessFlags {
  bool coagulation = true;
  bool emissions = true;
  bool dilution = true;
  bool operator==(const ProcessFlags&) const = default;
};

/// Piecewise-linear relative humidity as a function of time, held constant
/// outside the table.
struct RhProfile {
  std::vector<std::pair<double, double>> points;  // (time s, saturation ratio)
  double at(double time) const;
  bool operator==(const RhProfile&) const = default;
};

struct DiagnosticsConfig {
  double output_interval = 3600.0;  // s
  HistogramGrid hist_grid = HistogramGrid::log_diameter(1e-9, 1e-5, 100);
  /// Species defining the mass fraction axis of the 2D histogram; empty means
  /// no 2D histogram is produced.
  std::vector<std::string> fraction_species;
  std::optional<OpticsSpec> optics;
  bool operator==(const DiagnosticsConfig&) const = default;
};

struct Scenario {
  SpeciesDatabase db;
  AeroDist initial_dist;
  std::vector<EmissionEntry> emissions;
  GasState initial_gas;
  std::vector<GasEmission> gas_emissions;
  DilutionSpec dilution;
  EnvState env;
  std::optional<RhProfile> rh_profile;
  double duration = 0.0;  // s
  double dt = 0.0;        // s
  std::size_t n_target = 1000;
  ProcessFlags processes;
  std::uint64_t seed = 0;
  Kernel kernel = BrownianKernel{};
  BinGrid coag_grid = BinGrid::log_spaced(1e-10, 1e-3, 140);
  CountSampling sampling = CountSampling::poisson;
  DiagnosticsConfig diagnostics;

  /// Checks cross-field constraints (duration/dt integral, windows, n_target,
  /// species references). Throws SemanticError or SchemaError.
  void validate() const;
  /// Number of dt steps in `span` seconds; throws RangeError unless span is
  /// an integral multiple of dt.
  std::size_t steps_in(double span) const;

  bool operator==(const Scenario&) const = default;
};

/// What one step did, for tracing and tests.
struct StepReport {
  std::vector<ParticleId> emitted;
  std::vector<ParticleId> background_added;
  std::size_t diluted_out = 0;
  std::vector<CoagEvent> coag_events;
};

/// A running simulation: particle population, gas phase, environment and
/// clock for one scenario and seed.
class SimState {
 public:
  /// Builds the initial population: comp_volume = n_target / reference
  /// concentration, particles sampled from initial_dist, env and gas from the
  /// scenario. Throws on an invalid scenario.
  explicit SimState(Scenario scenario);

  const Scenario& scenario() const noexcept { return scenario_; }
  const AeroState& aero() const noexcept { return aero_; }
  AeroState& aero() noexcept { return aero_; }
  const GasState& gas() const noexcept { return gas_; }
  GasState& gas() noexcept { return gas_; }
  const EnvState& env() const noexcept { return env_; }
  EnvState& env() noexcept { return env_; }

  std::size_t step_index() const noexcept { return step_index_; }
  std::size_t total_steps() const noexcept { return total_steps_; }
  double clock() const noexcept { return static_cast<double>(step_index_) * scenario_.dt; }
  bool finished() const noexcept { return step_index_ >= total_steps_; }
  const StepReport& last_report() const noexcept { return report_; }

  Coagulator& coagulator() noexcept { return coagulator_; }

  /// Equal population, gas, environment and clock.
  bool same_state(const SimState& other) const;

 private:
  friend void step(SimState& sim);

  Scenario scenario_;
  AeroState aero_;
  GasState gas_;
  EnvState env_;
  Coagulator coagulator_;
  std::size_t step_index_ = 0;
  std::size_t total_steps_ = 0;
  StepReport report_;
};

/// Concentration used to size the computational volume at start-up: the
/// initial total number concentration, or, when that is zero, the number
/// expected from emissions and background over the run.
double reference_concentration(const Scenario& scenario);

/// Emissions over [clock, clock + dt): Poisson mean rate * comp_volume *
/// overlap per mode; gas mixing ratios += rate * overlap. Appends emitted
/// ids to `emitted` when given.
void emissions_step(SimState& sim, double dt, std::vector<ParticleId>* emitted = nullptr);

/// Removes each particle with probability 1 - exp(-rate dt), samples
/// background particles with mean rate dt num_conc comp_volume, relaxes gas
/// towards the background. Returns the number removed.
std::size_t dilution_step(SimState& sim, double dt,
                          std::vector<ParticleId>* background_added = nullptr);

/// One step: emissions, dilution, coagulation, environment update, rebalance.
/// Throws RangeError past the end of the run.
void step(SimState& sim);

/// Exactly t_block / dt calls to step(). Throws RangeError if t_block is not
/// a multiple of dt or overruns the duration.
void run_block(SimState& sim, double t_block);

}  // namespace aeromc
