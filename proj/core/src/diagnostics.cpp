#include "aeromc/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "aeromc/error.hpp"
#include "aeromc/particle.hpp"

namespace aeromc {

Totals totals(const AeroState& state, const SpeciesDatabase& db) {
  Totals t;
  t.species_mass_conc.assign(db.size(), 0.0);
  const double w = state.particle_number_conc();
  t.number_conc = static_cast<double>(state.size()) * w;
  for (const auto& p : state.particles()) {
    for (std::size_t i = 0; i < db.size(); ++i) t.species_mass_conc[i] += p.masses[i];
  }
  for (auto& m : t.species_mass_conc) {
    m *= w;
    t.mass_conc += m;
  }
  return t;
}

HistogramGrid HistogramGrid::log_diameter(double d_min, double d_max, std::size_t n_bins) {
  if (!(d_min > 0.0) || !(d_max > d_min) || n_bins < 1)
    throw SemanticError("grids.diameter", "histogram grid requires 0 < min < max and n_bins >= 1");
  HistogramGrid g;
  g.diameter_edges.resize(n_bins + 1);
  const double lo = std::log10(d_min);
  const double step = (std::log10(d_max) - lo) / static_cast<double>(n_bins);
  for (std::size_t i = 0; i <= n_bins; ++i)
    g.diameter_edges[i] = std::pow(10.0, lo + step * static_cast<double>(i));
  g.diameter_edges.front() = d_min;
  g.diameter_edges.back() = d_max;
  return g;
}

HistogramGrid HistogramGrid::with_fractions(std::size_t n_bins) const {
  if (n_bins < 1) throw SemanticError("grids.fraction.n_bins", "n_bins must be >= 1");
  HistogramGrid g = *this;
  std::vector<double> edges(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i)
    edges[i] = static_cast<double>(i) / static_cast<double>(n_bins);
  g.fraction_edges = std::move(edges);
  return g;
}

void HistogramGrid::validate() const {
  auto increasing = [](const std::vector<double>& e) {
    for (std::size_t i = 1; i < e.size(); ++i) {
      if (!(e[i] > e[i - 1])) return false;
    }
    return e.size() >= 2;
  };
  if (!increasing(diameter_edges) || !(diameter_edges.front() > 0.0))
    throw SemanticError("grids.diameter", "diameter edges must be positive and strictly increasing");
  if (fraction_edges) {
    if (!increasing(*fraction_edges) || fraction_edges->front() < 0.0 || fraction_edges->back() > 1.0)
      throw SemanticError("grids.fraction", "fraction edges must be strictly increasing within [0, 1]");
  }
}

double HistogramGrid::log_width(std::size_t i) const {
  return std::log10(diameter_edges[i + 1]) - std::log10(diameter_edges[i]);
}

std::optional<std::size_t> HistogramGrid::diameter_bin(double diameter) const {
  if (!(diameter >= diameter_edges.front()) || !(diameter < diameter_edges.back())) return std::nullopt;
  auto it = std::upper_bound(diameter_edges.begin(), diameter_edges.end(), diameter);
  return static_cast<std::size_t>(it - diameter_edges.begin()) - 1;
}

std::optional<std::size_t> HistogramGrid::fraction_bin(double fraction) const {
  if (!fraction_edges) return std::nullopt;
  const auto& e = *fraction_edges;
  if (!(fraction >= e.front()) || !(fraction <= e.back())) return std::nullopt;
  if (fraction == e.back()) return e.size() - 2;
  auto it = std::upper_bound(e.begin(), e.end(), fraction);
  return static_cast<std::size_t>(it - e.begin()) - 1;
}

namespace {

double diameter_of(const AeroParticle& p, const SpeciesDatabase& db, DiameterKind kind) {
  const auto d = particle_diameters(p, db);
  return kind == DiameterKind::dry ? d.dry : d.wet;
}

}  // namespace

Histogram1D histogram_1d(const AeroState& state, const HistogramGrid& grid, const SpeciesDatabase& db,
                         DiameterKind kind) {
  grid.validate();
  const std::size_t n = grid.n_diameter_bins();
  Histogram1D h;
  h.counts.assign(n, 0);
  h.values.assign(n, 0.0);
  for (const auto& p : state.particles()) {
    if (auto b = grid.diameter_bin(diameter_of(p, db, kind))) {
      ++h.counts[*b];
    } else {
      ++h.overflow;
    }
  }
  const double w = state.particle_number_conc();
  for (std::size_t i = 0; i < n; ++i)
    h.values[i] = static_cast<double>(h.counts[i]) * w / grid.log_width(i);
  return h;
}

Histogram2D histogram_2d(const AeroState& state, const HistogramGrid& grid, const SpeciesDatabase& db,
                         const std::vector<std::string>& fraction_species, DiameterKind kind) {
  if (!grid.fraction_edges) throw ConfigError("2D histogram requires a mass-fraction axis");
  grid.validate();
  const auto selector = MassSelector::of(db, fraction_species);
  const auto& f_edges = *grid.fraction_edges;

  Histogram2D h;
  h.rows = grid.n_diameter_bins();
  h.cols = f_edges.size() - 1;
  h.counts.assign(h.rows * h.cols, 0);
  h.values.assign(h.rows * h.cols, 0.0);
  for (const auto& p : state.particles()) {
    const auto row = grid.diameter_bin(diameter_of(p, db, kind));
    const auto col = grid.fraction_bin(particle_masses(p, db, selector).fraction);
    if (row && col) {
      ++h.counts[*row * h.cols + *col];
    } else {
      ++h.overflow;
    }
  }
  const double w = state.particle_number_conc();
  for (std::size_t r = 0; r < h.rows; ++r) {
    for (std::size_t c = 0; c < h.cols; ++c) {
      const double area = grid.log_width(r) * (f_edges[c + 1] - f_edges[c]);
      h.values[r * h.cols + c] = static_cast<double>(h.counts[r * h.cols + c]) * w / area;
    }
  }
  return h;
}

std::vector<double> Histogram2D::diameter_marginal(const HistogramGrid& grid) const {
  if (!grid.fraction_edges) throw ConfigError("2D histogram requires a mass-fraction axis");
  const auto& f = *grid.fraction_edges;
  std::vector<double> out(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[r] += at(r, c) * (f[c + 1] - f[c]);
  }
  return out;
}

}  // namespace aeromc
