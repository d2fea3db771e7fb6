#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aeromc/aero_state.hpp"
#include "aeromc/species.hpp"

namespace aeromc {

struct Totals {
  double number_conc = 0.0;                  // m^-3
  double mass_conc = 0.0;                    // kg m^-3, dry + water
  std::vector<double> species_mass_conc;     // kg m^-3, database order
};

Totals totals(const AeroState& state, const SpeciesDatabase& db);

/// Histogram binning: log10-diameter edges and optional linear mass-fraction
/// edges on [0, 1].
struct HistogramGrid {
  std::vector<double> diameter_edges;
  std::optional<std::vector<double>> fraction_edges;

  /// Throws SemanticError for invalid ranges.
  static HistogramGrid log_diameter(double d_min, double d_max, std::size_t n_bins);
  HistogramGrid with_fractions(std::size_t n_bins) const;
  void validate() const;

  std::size_t n_diameter_bins() const { return diameter_edges.size() - 1; }
  /// Width of bin i in log10 D.
  double log_width(std::size_t i) const;
  std::optional<std::size_t> diameter_bin(double diameter) const;
  /// Fraction bins are closed on the right for the last bin, so f = 1 lands
  /// in the top bin.
  std::optional<std::size_t> fraction_bin(double fraction) const;

  bool operator==(const HistogramGrid&) const = default;
};

enum class DiameterKind { dry, wet };

struct Histogram1D {
  std::vector<double> values;        // m^-3 per unit log10 D
  std::vector<std::size_t> counts;   // particles per bin
  std::size_t overflow = 0;          // particles outside the grid
};

/// n(D) per unit log10 D. Particles outside the grid are tallied in
/// `overflow`, so sum(values * dlog10D) + overflow / V = number_conc.
Histogram1D histogram_1d(const AeroState& state, const HistogramGrid& grid,
                         const SpeciesDatabase& db, DiameterKind kind = DiameterKind::wet);

struct Histogram2D {
  std::size_t rows = 0;  // diameter bins
  std::size_t cols = 0;  // fraction bins
  std::vector<double> values;       // row-major, m^-3 per (log10 D x fraction)
  std::vector<std::size_t> counts;  // row-major
  std::size_t overflow = 0;

  double at(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
  std::size_t count_at(std::size_t row, std::size_t col) const { return counts[row * cols + col]; }
  /// Integral over the fraction axis, comparable with histogram_1d.
  std::vector<double> diameter_marginal(const HistogramGrid& grid) const;
};

/// Number density over (dry diameter, dry-mass fraction of fraction_species).
/// Throws ConfigError if the grid has no fraction axis.
Histogram2D histogram_2d(const AeroState& state, const HistogramGrid& grid,
                         const SpeciesDatabase& db, const std::vector<std::string>& fraction_species,
                         DiameterKind kind = DiameterKind::dry);

}  // namespace aeromc
