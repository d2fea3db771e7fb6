#include "aeromc/coagulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "aeromc/constants.hpp"
#include "aeromc/error.hpp"
#include "aeromc/particle.hpp"

namespace aeromc {

void validate_kernel(const Kernel& kernel) {
  if (const auto* k = std::get_if<ConstantKernel>(&kernel); k && !(k->value > 0.0))
    throw SemanticError("run.kernel.value", "constant kernel value must be > 0");
  if (const auto* k = std::get_if<AdditiveKernel>(&kernel); k && !(k->coefficient > 0.0))
    throw SemanticError("run.kernel.value", "additive kernel coefficient must be > 0");
}

namespace brownian {

double air_viscosity(double temperature) {
  using namespace constants;
  return viscosity_ref * std::pow(temperature / viscosity_temperature_ref, 1.5) *
         (viscosity_temperature_ref + sutherland_constant) / (temperature + sutherland_constant);
}

double mean_free_path(double temperature, double pressure) {
  using namespace constants;
  return mean_free_path_ref * (temperature / temperature_ref) * (pressure_ref / pressure);
}

double slip_correction(double diameter, double temperature, double pressure) {
  const double kn = 2.0 * mean_free_path(temperature, pressure) / diameter;
  return 1.0 + kn * (1.257 + 0.4 * std::exp(-1.1 / kn));
}

double diffusivity(double diameter, double temperature, double pressure) {
  return constants::boltzmann * temperature * slip_correction(diameter, temperature, pressure) /
         (3.0 * constants::pi * air_viscosity(temperature) * diameter);
}

namespace {

struct Transport {
  double diffusivity;
  double speed;
  double g;  // Fuchs transition length
};

Transport transport(double diameter, double mass, double temperature, double pressure) {
  Transport t{};
  t.diffusivity = diffusivity(diameter, temperature, pressure);
  t.speed = std::sqrt(8.0 * constants::boltzmann * temperature / (constants::pi * mass));
  const double l = 8.0 * t.diffusivity / (constants::pi * t.speed);
  const double dl = diameter + l;
  t.g = (dl * dl * dl - std::pow(diameter * diameter + l * l, 1.5)) / (3.0 * diameter * l) - diameter;
  return t;
}

double fuchs(double d1, double m1, double d2, double m2, double temperature, double pressure) {
  const auto a = transport(d1, m1, temperature, pressure);
  const auto b = transport(d2, m2, temperature, pressure);
  const double dsum = d1 + d2;
  const double diff = a.diffusivity + b.diffusivity;
  const double speed = std::hypot(a.speed, b.speed);
  const double g = std::hypot(a.g, b.g);
  const double denom = dsum / (dsum + 2.0 * g) + 8.0 * diff / (speed * dsum);
  return 2.0 * constants::pi * dsum * diff / denom;
}

}  // namespace
}  // namespace brownian

double kernel_value(const Kernel& kernel, double d1, double m1, double d2, double m2,
                    const EnvState& env) {
  struct Visitor {
    double d1, m1, d2, m2;
    const EnvState& env;
    double operator()(const ConstantKernel& k) const { return k.value; }
    double operator()(const AdditiveKernel& k) const { return k.coefficient * (m1 + m2); }
    double operator()(const BrownianKernel&) const {
      // Sort the arguments so that the result is bitwise symmetric.
      if (d1 < d2 || (d1 == d2 && m1 < m2))
        return brownian::fuchs(d1, m1, d2, m2, env.temperature, env.pressure);
      return brownian::fuchs(d2, m2, d1, m1, env.temperature, env.pressure);
    }
  };
  return std::visit(Visitor{d1, m1, d2, m2, env}, kernel);
}

double kernel_value(const Kernel& kernel, const AeroParticle& p1, const AeroParticle& p2,
                    const EnvState& env, const SpeciesDatabase& db) {
  if (std::holds_alternative<ConstantKernel>(kernel)) return std::get<ConstantKernel>(kernel).value;
  return kernel_value(kernel, wet_diameter(p1.masses, db), total_mass(p1.masses),
                      wet_diameter(p2.masses, db), total_mass(p2.masses), env);
}

BinGrid BinGrid::log_spaced(double d_min, double d_max, std::size_t n_bins) {
  if (!(d_min > 0.0) || !(d_max > d_min) || n_bins < 1)
    throw SemanticError("grid", "bin grid requires 0 < min < max and n_bins >= 1");
  std::vector<double> edges(n_bins + 1);
  const double lo = std::log(d_min);
  const double step = (std::log(d_max) - lo) / static_cast<double>(n_bins);
  for (std::size_t i = 0; i <= n_bins; ++i) edges[i] = std::exp(lo + step * static_cast<double>(i));
  edges.front() = d_min;
  edges.back() = d_max;
  return BinGrid(std::move(edges));
}

BinGrid::BinGrid(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw SemanticError("grid", "bin grid needs at least two edges");
  if (!(edges_.front() > 0.0)) throw SemanticError("grid", "bin edges must be positive");
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (!(edges_[i] > edges_[i - 1])) throw SemanticError("grid", "bin edges must be strictly increasing");
  }
}

std::optional<std::size_t> BinGrid::bin_of(double diameter) const {
  if (!(diameter >= edges_.front()) || !(diameter < edges_.back())) return std::nullopt;
  auto it = std::upper_bound(edges_.begin(), edges_.end(), diameter);
  return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

ParticleId apply_coag_event(AeroState& state, ParticleId i, ParticleId j) {
  if (i == j) throw DomainError("a particle cannot coagulate with itself");
  const auto& a = state.get(i).masses;
  const auto& b = state.get(j).masses;
  std::vector<double> merged(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) merged[k] = a[k] + b[k];
  state.remove(i);
  state.remove(j);
  return state.add(std::move(merged));
}

Coagulator::Coagulator(Kernel kernel, BinGrid grid, SpeciesDatabase db)
    : kernel_(kernel), grid_(std::move(grid)), db_(std::move(db)) {
  validate_kernel(kernel_);
}

void Coagulator::refresh_majorants(const EnvState& env) {
  const std::pair<double, double> key{env.temperature, env.pressure};
  if (cached_env_ && *cached_env_ == key) return;

  const std::size_t nb = grid_.n_bins();
  const auto& edges = grid_.edges();
  const double densities[2] = {db_.min_density(), db_.max_density()};
  majorants_.assign(nb * nb, 0.0);
  for (std::size_t a = 0; a < nb; ++a) {
    for (std::size_t b = a; b < nb; ++b) {
      double kmax = 0.0;
      for (double da : {edges[a], edges[a + 1]}) {
        for (double dbb : {edges[b], edges[b + 1]}) {
          for (double ra : densities) {
            for (double rb : densities) {
              const double k = kernel_value(kernel_, da, ra * diameter_to_volume(da), dbb,
                                            rb * diameter_to_volume(dbb), env);
              kmax = std::max(kmax, k);
            }
          }
        }
      }
      majorants_[a * nb + b] = majorants_[b * nb + a] = majorant_safety * kmax;
    }
  }
  cached_env_ = key;
}

double Coagulator::majorant(std::size_t a, std::size_t b, const EnvState& env) {
  refresh_majorants(env);
  return majorants_[a * grid_.n_bins() + b];
}

namespace {

std::size_t bin_or_throw(const BinGrid& grid, double diameter, ParticleId id) {
  if (auto b = grid.bin_of(diameter)) return *b;
  std::ostringstream msg;
  msg.precision(17);
  msg << "particle " << id << " with diameter " << diameter
      << " m lies outside the coagulation grid [" << grid.edges().front() << ", "
      << grid.edges().back() << ") m";
  throw ConfigError(msg.str());
}

// Removes the entry at `pos` by moving the last entry into it.
void swap_pop(std::vector<ParticleId>& bin, std::size_t pos) {
  bin[pos] = bin.back();
  bin.pop_back();
}

}  // namespace

std::vector<CoagEvent> Coagulator::step(AeroState& state, const EnvState& env, double dt) {
  if (dt < 0.0) throw DomainError("coagulation time step must be >= 0");
  std::vector<CoagEvent> events;
  if (dt == 0.0 || state.size() < 2) return events;

  refresh_majorants(env);
  const std::size_t nb = grid_.n_bins();
  std::vector<std::vector<ParticleId>> bins(nb);
  for (const auto& p : state.particles()) {
    bins[bin_or_throw(grid_, wet_diameter(p.masses, db_), p.id)].push_back(p.id);
  }

  auto& rng = state.rng();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double scale = dt / state.comp_volume();

  for (std::size_t a = 0; a < nb; ++a) {
    if (bins[a].empty()) continue;
    for (std::size_t b = a; b < nb; ++b) {
      const auto na = static_cast<double>(bins[a].size());
      const auto nbb = static_cast<double>(bins[b].size());
      const double pairs = a == b ? 0.5 * na * (na - 1.0) : na * nbb;
      if (!(pairs > 0.0)) continue;

      const double kmax = majorants_[a * nb + b];
      std::poisson_distribution<std::uint64_t> candidates(kmax * pairs * scale);
      const std::uint64_t n_candidates = candidates(rng);

      for (std::uint64_t c = 0; c < n_candidates; ++c) {
        auto& bin_a = bins[a];
        auto& bin_b = bins[b];
        if (a == b ? bin_a.size() < 2 : (bin_a.empty() || bin_b.empty())) break;

        std::size_t ia = std::uniform_int_distribution<std::size_t>(0, bin_a.size() - 1)(rng);
        std::size_t ib = 0;
        if (a == b) {
          ib = std::uniform_int_distribution<std::size_t>(0, bin_a.size() - 2)(rng);
          if (ib >= ia) ++ib;
        } else {
          ib = std::uniform_int_distribution<std::size_t>(0, bin_b.size() - 1)(rng);
        }
        const ParticleId id_a = bin_a[ia];
        const ParticleId id_b = bin_b[ib];

        const double k = kernel_value(kernel_, state.get(id_a), state.get(id_b), env, db_);
        if (k > kmax) ++violations_;
        if (!(unit(rng) * kmax < k)) continue;

        if (a == b) {
          swap_pop(bin_a, std::max(ia, ib));
          swap_pop(bin_a, std::min(ia, ib));
        } else {
          swap_pop(bin_a, ia);
          swap_pop(bin_b, ib);
        }
        const ParticleId merged = apply_coag_event(state, id_a, id_b);
        const double d = wet_diameter(state.get(merged).masses, db_);
        bins[bin_or_throw(grid_, d, merged)].push_back(merged);
        events.push_back(CoagEvent{id_a, id_b, merged, env.elapsed_time});
      }
    }
  }
  return events;
}

std::vector<CoagEvent> coag_step(AeroState& state, const Kernel& kernel, const EnvState& env,
                                 const BinGrid& grid, const SpeciesDatabase& db, double dt) {
  Coagulator coagulator(kernel, grid, db);
  return coagulator.step(state, env, dt);
}

}  // namespace aeromc
