#include "aeromc/equilibrium.hpp"

#include <cmath>
#include <string>

#include "aeromc/constants.hpp"
#include "aeromc/error.hpp"
#include "aeromc/particle.hpp"

namespace aeromc {

double kelvin_coefficient(double temperature) {
  using namespace constants;
  if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
  return 4.0 * water_surface_tension * water_molar_mass /
         (gas_constant * temperature * water_density);
}

KoehlerParams koehler_params(double temperature, double kappa, double dry_diameter) {
  return {kelvin_coefficient(temperature), kappa, dry_diameter};
}

namespace {

void check_params(const KoehlerParams& p) {
  if (!(p.kelvin_A > 0.0)) throw DomainError("Kelvin coefficient must be > 0");
  if (!(p.kappa >= 0.0)) throw DomainError("kappa must be >= 0");
  if (!(p.dry_diameter > 0.0)) throw DomainError("dry diameter must be > 0");
}

// S(D) without argument checks; D >= Dd assumed.
double koehler(double d, const KoehlerParams& p) {
  const double dd = p.dry_diameter;
  // D^3 - Dd^3 factored to avoid cancellation near the dry diameter.
  const double water = (d - dd) * (d * d + d * dd + dd * dd);
  const double solute = p.kappa * dd * dd * dd;
  const double activity = p.kappa == 0.0 ? 1.0 : water / (water + solute);
  return activity * std::exp(p.kelvin_A / d);
}

}  // namespace

double saturation_ratio(double diameter, const KoehlerParams& params) {
  check_params(params);
  if (!(diameter >= params.dry_diameter))
    throw DomainError("wet diameter must be >= dry diameter");
  return koehler(diameter, params);
}

CriticalPoint critical_point(const KoehlerParams& params) {
  check_params(params);
  if (params.kappa == 0.0)
    throw UnsupportedError("critical supersaturation requires kappa > 0 (S has no maximum)");

  const double dd = params.dry_diameter;
  const double asymptotic = std::sqrt(3.0 * params.kappa * dd * dd * dd / params.kelvin_A);
  double lo = std::log(dd);
  double hi = std::log(10.0 * std::max(dd, asymptotic));
  auto f = [&](double u) { return koehler(std::exp(u), params); };

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double u = f1 > f2 ? x1 : x2;
  return {std::exp(u), std::max(f1, f2) - 1.0};
}

double critical_supersaturation(const KoehlerParams& params) {
  return critical_point(params).supersaturation;
}

double equilibrate_wet_diameter(const KoehlerParams& params, double rh) {
  check_params(params);
  if (!(rh >= 0.0)) throw DomainError("relative humidity must be >= 0");
  if (rh >= 1.0)
    throw UnsupportedError("equilibrium on the stable branch requires relative humidity < 1");
  if (params.kappa == 0.0 || rh == 0.0) return params.dry_diameter;

  // S rises monotonically from 0 at Dd to S_max > 1 at the critical diameter.
  double lo = params.dry_diameter;
  double hi = critical_point(params).diameter;
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    (koehler(mid, params) < rh ? lo : hi) = mid;
  }
  const double r_lo = std::abs(koehler(lo, params) - rh);
  const double r_hi = std::abs(koehler(hi, params) - rh);
  return r_lo <= r_hi ? lo : hi;
}

double effective_kappa(std::span<const double> masses, const SpeciesDatabase& db) {
  double v = 0.0;
  double kv = 0.0;
  for (std::size_t i = 0; i < db.size(); ++i) {
    if (db[i].is_water) continue;
    const double vi = masses[i] / db[i].density;
    v += vi;
    kv += db[i].kappa * vi;
  }
  if (!(v > 0.0)) throw DegenerateParticleError("particle has no dry mass");
  return kv / v;
}

void equilibrate_state(AeroState& state, const EnvState& env, const SpeciesDatabase& db) {
  const auto water = db.water_index();
  if (!water) throw SchemaError("species", "equilibration requires a water species (is_water)");
  const double rh = env.relative_humidity;
  if (rh >= 1.0)
    throw UnsupportedError("equilibrium on the stable branch requires relative humidity < 1");
  const double kelvin = kelvin_coefficient(env.temperature);
  const double rho_w = db[*water].density;

  for (const auto& p : state.particles()) {
    validate_particle(p.masses, db);
    const double dd = dry_diameter(p.masses, db);
    const KoehlerParams params{kelvin, effective_kappa(p.masses, db), dd};
    const double dw = equilibrate_wet_diameter(params, rh);
    const double water_volume = std::max(0.0, diameter_to_volume(dw) - diameter_to_volume(dd));
    state.masses(p.id)[*water] = rho_w * water_volume;
  }
}

}  // namespace aeromc
