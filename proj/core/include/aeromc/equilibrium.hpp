#pragma once

#include "aeromc/aero_state.hpp"
#include "aeromc/environment.hpp"
#include "aeromc/species.hpp"

namespace aeromc {

/// Parameters of a single-kappa Koehler curve.
struct KoehlerParams {
  double kelvin_A = 0.0;      // m, 4 sigma_w M_w / (R T rho_w)
  double kappa = 0.0;
  double dry_diameter = 0.0;  // m
};

/// Kelvin coefficient A(T) in metres.
double kelvin_coefficient(double temperature);

KoehlerParams koehler_params(double temperature, double kappa, double dry_diameter);

/// Equilibrium saturation ratio over a droplet of wet diameter D:
///   S(D) = (D^3 - Dd^3) / (D^3 - Dd^3 (1 - kappa)) * exp(A / D).
/// Throws DomainError for D < Dd.
double saturation_ratio(double diameter, const KoehlerParams& params);

/// Stable-branch equilibrium wet diameter at saturation ratio rh < 1, found
/// by bisection between the dry diameter and the critical diameter. Returns
/// the dry diameter when kappa == 0 or rh == 0. Throws UnsupportedError for
/// rh >= 1 and DomainError for rh < 0.
double equilibrate_wet_diameter(const KoehlerParams& params, double rh);

struct CriticalPoint {
  double diameter = 0.0;         // m
  double supersaturation = 0.0;  // S_max - 1
};

/// Maximum of the Koehler curve by golden-section search in log D.
/// Throws UnsupportedError for kappa == 0.
CriticalPoint critical_point(const KoehlerParams& params);
double critical_supersaturation(const KoehlerParams& params);

/// Dry-volume-weighted mean kappa of a particle.
double effective_kappa(std::span<const double> masses, const SpeciesDatabase& db);

/// Sets every particle's water mass so that its wet diameter is in
/// equilibrium with env.relative_humidity. Dry masses are untouched.
/// Throws SchemaError if db has no water species.
void equilibrate_state(AeroState& state, const EnvState& env, const SpeciesDatabase& db);

}  // namespace aeromc
