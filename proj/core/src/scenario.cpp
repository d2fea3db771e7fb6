#include "aeromc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "aeromc/error.hpp"

namespace aeromc {

double RhProfile::at(double time) const {
  if (points.empty()) return 0.0;
  if (time <= points.front().first) return points.front().second;
  if (time >= points.back().first) return points.back().second;
  auto hi = std::upper_bound(points.begin(), points.end(), time,
                             [](double t, const auto& p) { return t < p.first; });
  auto lo = std::prev(hi);
  const double w = (time - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

namespace {

// Number of whole dt steps in span, or nullopt if span is not a multiple.
std::optional<std::size_t> whole_steps(double span, double dt) {
  if (!(span >= 0.0) || !(dt > 0.0)) return std::nullopt;
  const double ratio = span / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) return std::nullopt;
  return static_cast<std::size_t>(rounded);
}

void check_species(const AeroDist& dist, const SpeciesDatabase& db, const std::string& path) {
  for (std::size_t m = 0; m < dist.modes.size(); ++m) {
    const auto& mode = dist.modes[m];
    bool has_dry = false;
    for (const auto& [name, f] : mode.mass_fracs()) {
      auto i = db.find(name);
      const std::string fpath = path + ".modes[" + std::to_string(m) + "].mass_fracs." + name;
      if (!i) throw SchemaError(fpath, "species '" + name + "' is not defined in `species`");
      if (!db[*i].is_water && f > 0.0) has_dry = true;
    }
    if (!has_dry) {
      throw SemanticError(path + ".modes[" + std::to_string(m) + "].mass_fracs",
                          "mode must contain at least one dry species");
    }
  }
}

}  // namespace

std::size_t Scenario::steps_in(double span) const {
  if (auto n = whole_steps(span, dt)) return *n;
  throw RangeError("time span " + std::to_string(span) + " s is not a multiple of dt = " +
                   std::to_string(dt) + " s");
}

void Scenario::validate() const {
  if (db.empty()) throw SemanticError("species", "at least one species is required");
  validate_env(env);
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw SemanticError("run.duration", "duration must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw SemanticError("run.dt", "dt must be > 0");
  if (!whole_steps(duration, dt)) {
    throw SemanticError("run.duration", "duration " + std::to_string(duration) +
                                            " s is not an integral multiple of dt = " +
                                            std::to_string(dt) + " s");
  }
  if (n_target < 10) throw SemanticError("run.n_target", "n_target must be >= 10");
  if (!(diagnostics.output_interval > 0.0) || !whole_steps(diagnostics.output_interval, dt)) {
    throw SemanticError("run.output_interval", "output_interval must be a positive multiple of dt");
  }
  validate_kernel(kernel);

  check_species(initial_dist, db, "initial_dist");
  for (std::size_t e = 0; e < emissions.size(); ++e) {
    const std::string path = "emissions[" + std::to_string(e) + "]";
    if (!(emissions[e].start < emissions[e].stop))
      throw SemanticError(path, "emission window start must be < stop");
    check_species(emissions[e].dist, db, path + ".dist");
  }
  for (std::size_t g = 0; g < gas_emissions.size(); ++g) {
    const std::string path = "gas.emissions[" + std::to_string(g) + "]";
    if (!(gas_emissions[g].start < gas_emissions[g].stop))
      throw SemanticError(path, "emission window start must be < stop");
    if (!(gas_emissions[g].rate >= 0.0)) throw SemanticError(path + ".rate", "rate must be >= 0");
  }
  for (const auto& [name, v] : initial_gas.mixing_ratios) {
    if (!(v >= 0.0)) throw SemanticError("gas.initial." + name, "mixing ratio must be >= 0");
  }
  if (!(dilution.rate >= 0.0) || !std::isfinite(dilution.rate))
    throw SemanticError("dilution.rate", "dilution rate must be >= 0");
  check_species(dilution.background_aero, db, "dilution.background_aero");
  for (const auto& [name, v] : dilution.background_gas.mixing_ratios) {
    if (!(v >= 0.0))
      throw SemanticError("dilution.background_gas." + name, "mixing ratio must be >= 0");
  }
  if (rh_profile) {
    const auto& pts = rh_profile->points;
    if (pts.empty()) throw SemanticError("env.rh_profile", "rh_profile must not be empty");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!(pts[i].second >= 0.0))
        throw SemanticError("env.rh_profile[" + std::to_string(i) + "]", "relative humidity must be >= 0");
      if (i > 0 && !(pts[i].first > pts[i - 1].first))
        throw SemanticError("env.rh_profile[" + std::to_string(i) + "]", "times must be strictly increasing");
    }
  }
  diagnostics.hist_grid.validate();
  if (!diagnostics.fraction_species.empty()) {
    if (!diagnostics.hist_grid.fraction_edges)
      throw SemanticError("grids.fraction", "fraction species given without a fraction axis");
    for (const auto& s : diagnostics.fraction_species) {
      if (!db.find(s)) throw SchemaError("grids.fraction.species", "unknown species '" + s + "'");
    }
  }
  if (diagnostics.optics) {
    diagnostics.optics->validate();
    diagnostics.optics->index_vector(db);
  }
}

double reference_concentration(const Scenario& s) {
  const double initial = s.initial_dist.total_num_conc();
  if (initial > 0.0) return initial;
  double expected = 0.0;
  for (const auto& e : s.emissions) {
    const double window = std::max(0.0, std::min(e.stop, s.duration) - std::max(e.start, 0.0));
    expected += e.dist.total_num_conc() * window;
  }
  expected += s.dilution.background_aero.total_num_conc();
  return expected > 0.0 ? expected : 1.0;
}

SimState::SimState(Scenario scenario)
    : scenario_((scenario.validate(), std::move(scenario))),
      aero_(static_cast<double>(scenario_.n_target) / reference_concentration(scenario_), scenario_.seed),
      gas_(scenario_.initial_gas),
      env_(scenario_.env),
      coagulator_(scenario_.kernel, scenario_.coag_grid, scenario_.db),
      total_steps_(scenario_.steps_in(scenario_.duration)) {
  env_.elapsed_time = 0.0;
  if (scenario_.rh_profile) env_.relative_humidity = scenario_.rh_profile->at(0.0);
  dist_sample(aero_, scenario_.initial_dist, scenario_.db, {1.0, scenario_.sampling});
}

bool SimState::same_state(const SimState& other) const {
  return aero_ == other.aero_ && gas_ == other.gas_ && env_ == other.env_ &&
         step_index_ == other.step_index_;
}

namespace {

double overlap(double t0, double t1, double start, double stop) {
  return std::max(0.0, std::min(t1, stop) - std::max(t0, start));
}

}  // namespace

void emissions_step(SimState& sim, double dt, std::vector<ParticleId>* emitted) {
  if (!(dt > 0.0)) throw DomainError("emissions time step must be > 0");
  const auto& sc = sim.scenario();
  const double t0 = sim.clock();
  const double t1 = t0 + dt;

  for (const auto& e : sc.emissions) {
    const double active = overlap(t0, t1, e.start, e.stop);
    if (active <= 0.0) continue;
    auto ids = dist_sample(sim.aero(), e.dist, sc.db, {active, sc.sampling});
    if (emitted) emitted->insert(emitted->end(), ids.begin(), ids.end());
  }
  for (const auto& g : sc.gas_emissions) {
    const double active = overlap(t0, t1, g.start, g.stop);
    if (active > 0.0) sim.gas().mixing_ratios[g.species] += g.rate * active;
  }
}

std::size_t dilution_step(SimState& sim, double dt, std::vector<ParticleId>* background_added) {
  if (!(dt > 0.0)) throw DomainError("dilution time step must be > 0");
  const auto& sc = sim.scenario();
  const double rate = sc.dilution.rate;
  if (rate == 0.0) return 0;

  const double p_remove = -std::expm1(-rate * dt);
  auto& aero = sim.aero();
  std::bernoulli_distribution remove(p_remove);
  std::vector<ParticleId> doomed;
  for (const auto& p : aero.particles()) {
    if (remove(aero.rng())) doomed.push_back(p.id);
  }
  for (auto id : doomed) aero.remove(id);

  auto ids = dist_sample(aero, sc.dilution.background_aero, sc.db, {rate * dt, sc.sampling});
  if (background_added) background_added->insert(background_added->end(), ids.begin(), ids.end());

  std::set<std::string> names;
  for (const auto& [n, v] : sim.gas().mixing_ratios) names.insert(n);
  for (const auto& [n, v] : sc.dilution.background_gas.mixing_ratios) names.insert(n);
  for (const auto& n : names) {
    const double g = sim.gas().get(n);
    sim.gas().mixing_ratios[n] = g + (sc.dilution.background_gas.get(n) - g) * p_remove;
  }
  return doomed.size();
}

void step(SimState& sim) {
  if (sim.finished()) {
    throw RangeError("cannot step past the end of the run (duration " +
                     std::to_string(sim.scenario_.duration) + " s)");
  }
  const auto& sc = sim.scenario_;
  const double dt = sc.dt;
  StepReport report;

  if (sc.processes.emissions) emissions_step(sim, dt, &report.emitted);
  if (sc.processes.dilution) report.diluted_out = dilution_step(sim, dt, &report.background_added);
  if (sc.processes.coagulation) report.coag_events = sim.coagulator_.step(sim.aero_, sim.env_, dt);

  ++sim.step_index_;
  sim.env_.elapsed_time = sim.clock();
  if (sc.rh_profile) sim.env_.relative_humidity = sc.rh_profile->at(sim.clock());

  state_rebalance(sim.aero_, std::max<std::size_t>(1, sc.n_target / 2), 2 * sc.n_target);
  sim.report_ = std::move(report);
}

void run_block(SimState& sim, double t_block) {
  const std::size_t n = sim.scenario().steps_in(t_block);
  if (sim.step_index() + n > sim.total_steps()) {
    throw RangeError("time block of " + std::to_string(t_block) + " s overruns the run duration");
  }
  for (std::size_t i = 0; i < n; ++i) step(sim);
}

}  // namespace aeromc
