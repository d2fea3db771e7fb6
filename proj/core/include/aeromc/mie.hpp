#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aeromc/aero_state.hpp"
#include "aeromc/species.hpp"

namespace aeromc {

struct MieEfficiencies {
  double ext = 0.0;
  double sca = 0.0;
  double abs = 0.0;
};

/// Largest size parameter accepted by mie_efficiencies.
inline constexpr double max_size_parameter = 1e4;

/// Homogeneous-sphere Mie efficiencies for a sphere of the given diameter and
/// complex refractive index n + ik (k >= 0 absorbing). Throws DomainError for
/// non-positive sizes and RangeError for size parameters above 1e4.
MieEfficiencies mie_efficiencies(double diameter, std::complex<double> refractive_index,
                                 double wavelength);

/// Same, parameterized directly by the size parameter x = pi D / lambda.
MieEfficiencies mie_efficiencies_x(double size_parameter, std::complex<double> refractive_index);

struct OpticsSpec {
  double wavelength = 550e-9;  // m
  std::map<std::string, std::complex<double>> refractive_index;
  /// Used for the water species when it has no entry in refractive_index.
  std::optional<std::complex<double>> water_refractive_index;

  /// Throws SemanticError for a non-positive wavelength or n < 1 / k < 0.
  void validate() const;
  /// Indices along the database axis. Throws SchemaError if any species has
  /// no refractive index.
  std::vector<std::complex<double>> index_vector(const SpeciesDatabase& db) const;

  bool operator==(const OpticsSpec&) const = default;
};

struct ParticleOptics {
  ParticleId id = 0;
  double diameter = 0.0;  // wet, m
  double q_sca = 0.0;
  double q_abs = 0.0;
};

struct BulkOptics {
  double b_sca = 0.0;  // m^-1
  double b_abs = 0.0;  // m^-1
  std::vector<ParticleOptics> per_particle;  // state iteration order
};

/// Per-particle efficiencies with a volume-weighted average refractive index
/// (water included), summed into bulk coefficients
/// b = sum (pi D^2 / 4) Q / comp_volume.
BulkOptics bulk_optical_coeffs(const AeroState& state, const SpeciesDatabase& db,
                               const OpticsSpec& optics);

}  // namespace aeromc
