#include <doctest.h>

#include "support/test_util.hpp"

using namespace aeromc;
using aeromc::test::rel_err;

namespace {

AeroState sampled(const SpeciesDatabase& db, std::size_t n, std::uint64_t seed, const AeroDist& dist) {
  AeroState s(static_cast<double>(n) / dist.total_num_conc(), seed);
  dist_sample(s, dist, db, {1.0, CountSampling::rounded});
  return s;
}

AeroDist two_source() {
  return AeroDist{{AeroMode("oc", ModeType::log_normal, 5e9, 5e-8, 1.6, {{"OC", 1.0}}),
                   AeroMode("soot", ModeType::log_normal, 5e9, 1e-7, 1.6, {{"OC", 0.3}, {"BC", 0.7}})}};
}

double closure(const Histogram1D& h, const HistogramGrid& g, double comp_volume) {
  double sum = 0.0;
  for (std::size_t i = 0; i < h.values.size(); ++i) sum += h.values[i] * g.log_width(i);
  return sum + static_cast<double>(h.overflow) / comp_volume;
}

}  // namespace

TEST_CASE("totals") {
  auto db = aeromc::test::carbon_db();
  AeroState empty(1e-6);
  auto t0 = totals(empty, db);
  CHECK(t0.number_conc == 0.0);
  CHECK(t0.mass_conc == 0.0);
  CHECK(t0.species_mass_conc == std::vector<double>(3, 0.0));

  AeroState s(1e-6);
  s.add({1e-18, 0.0, 0.0});
  s.add({0.0, 2e-18, 0.0});
  s.add({1e-18, 1e-18, 1e-18});
  auto t = totals(s, db);
  CHECK(rel_err(t.number_conc, 3e6) < 1e-15);
  CHECK(rel_err(t.mass_conc, 6e-12) < 1e-14);
  CHECK(rel_err(t.species_mass_conc[1], 3e-12) < 1e-14);
}

TEST_CASE("single particle fills one bin") {
  auto db = aeromc::test::single_species_db();
  AeroState s(1e-6);
  s.add(composition_for_diameter(1.5e-7, {1.0}, db));
  auto g = HistogramGrid::log_diameter(1e-9, 1e-5, 40);
  auto h = histogram_1d(s, g, db);
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < h.values.size(); ++i) {
    if (h.values[i] != 0.0) {
      ++nonzero;
      CHECK(rel_err(h.values[i], 1e6 / g.log_width(i)) < 1e-14);
      CHECK(*g.diameter_bin(1.5e-7) == i);
    }
  }
  CHECK(nonzero == 1);
}

TEST_CASE("histogram closure including overflow") {
  auto db = aeromc::test::carbon_db();
  auto s = sampled(db, 20000, 3, two_source());
  s.add(composition_for_diameter(5e-5, {1.0, 0.0, 0.0}, db));
  auto g = HistogramGrid::log_diameter(1e-8, 1e-6, 50);
  for (auto kind : {DiameterKind::dry, DiameterKind::wet}) {
    auto h = histogram_1d(s, g, db, kind);
    CHECK(h.overflow >= 1);
    CHECK(rel_err(closure(h, g, s.comp_volume()), totals(s, db).number_conc) < 1e-12);
  }
}

TEST_CASE("histogram converges to the pdf") {
  auto db = aeromc::test::carbon_db();
  AeroMode mode("m", ModeType::log_normal, 1e9, 1e-7, 1.7, {{"OC", 1.0}});
  auto s = sampled(db, 1000000, 5, AeroDist{{mode}});
  auto g = HistogramGrid::log_diameter(1e-8, 1e-6, 40);
  auto h = histogram_1d(s, g, db, DiameterKind::dry);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < h.values.size(); ++i) {
    // At 1e4 particles the Poisson noise is 1%, so 5% is a five-sigma bound.
    if (h.counts[i] < 10000) continue;
    // Mean of the pdf over the bin.
    const double lo = std::log10(g.diameter_edges[i]), w = g.log_width(i);
    double mean = 0.0;
    for (int k = 0; k < 64; ++k) mean += mode_pdf(mode, std::pow(10.0, lo + (k + 0.5) * w / 64)) / 64;
    CHECK(rel_err(h.values[i], mean) < 0.05);
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("2D histogram of pure BC particles") {
  SpeciesDatabase db({{"OC", 1000.0, 0.0, false}, {"BC", 1800.0, 0.0, false}});
  AeroDist dist{{AeroMode("bc", ModeType::log_normal, 1e9, 1e-7, 1.5, {{"BC", 1.0}})}};
  auto s = sampled(db, 1000, 1, dist);
  auto g = HistogramGrid::log_diameter(1e-8, 1e-5, 30).with_fractions(10);
  auto h = histogram_2d(s, g, db, {"BC"});
  for (std::size_t r = 0; r < h.rows; ++r)
    for (std::size_t c = 0; c + 1 < h.cols; ++c) CHECK(h.count_at(r, c) == 0);
  std::size_t top = 0;
  for (std::size_t r = 0; r < h.rows; ++r) top += h.count_at(r, h.cols - 1);
  CHECK(top + h.overflow == s.size());
}

TEST_CASE("2D marginal equals the 1D histogram") {
  auto db = aeromc::test::carbon_db();
  auto s = sampled(db, 20000, 9, two_source());
  auto g = HistogramGrid::log_diameter(1e-8, 1e-6, 50).with_fractions(20);
  auto h2 = histogram_2d(s, g, db, {"BC"});
  auto h1 = histogram_1d(s, g, db, DiameterKind::dry);
  auto marginal = h2.diameter_marginal(g);
  CHECK(h2.overflow == h1.overflow);
  for (std::size_t r = 0; r < h2.rows; ++r) {
    std::size_t count = 0;
    for (std::size_t c = 0; c < h2.cols; ++c) count += h2.count_at(r, c);
    CHECK(count == h1.counts[r]);
    CHECK(rel_err(marginal[r], h1.values[r]) < 1e-12);
  }
}

TEST_CASE("two-source population occupies two fraction bands") {
  auto db = aeromc::test::carbon_db();
  auto s = sampled(db, 5000, 12, two_source());
  auto g = HistogramGrid::log_diameter(1e-9, 1e-5, 40).with_fractions(10);
  auto h = histogram_2d(s, g, db, {"BC"});
  std::set<std::size_t> occupied;
  for (std::size_t r = 0; r < h.rows; ++r)
    for (std::size_t c = 0; c < h.cols; ++c)
      if (h.count_at(r, c) > 0) occupied.insert(c);
  CHECK(occupied == std::set<std::size_t>{0, *g.fraction_bin(0.7)});
}

TEST_CASE("histogram configuration errors") {
  auto db = aeromc::test::carbon_db();
  AeroState s(1e-6);
  auto g = HistogramGrid::log_diameter(1e-9, 1e-5, 10);
  CHECK_THROWS_AS(histogram_2d(s, g, db, {"BC"}), ConfigError);
  CHECK_THROWS_AS(HistogramGrid::log_diameter(1e-5, 1e-9, 10), SemanticError);
  CHECK_THROWS_AS(HistogramGrid::log_diameter(1e-9, 1e-5, 0), SemanticError);
  CHECK_THROWS_AS(g.with_fractions(0), SemanticError);
  auto f = g.with_fractions(4);
  CHECK(f.fraction_bin(1.0) == std::optional<std::size_t>(3));
  CHECK(f.fraction_bin(0.0) == std::optional<std::size_t>(0));
  CHECK(f.fraction_bin(0.25) == std::optional<std::size_t>(1));
}

TEST_CASE("bulk optics") {
  SpeciesDatabase db({{"OC", 1000.0, 0.1, false}, {"BC", 1800.0, 0.0, false}, {"H2O", 1000.0, 0.0, true}});
  OpticsSpec optics{550e-9, {{"OC", {1.45, 0.0}}, {"BC", {1.85, 0.71}}}, std::complex<double>(1.33, 0.0)};

  AeroState empty(1e-6);
  auto e = bulk_optical_coeffs(empty, db, optics);
  CHECK(e.b_sca == 0.0);
  CHECK(e.b_abs == 0.0);
  CHECK(e.per_particle.empty());

  SUBCASE("single particle") {
    AeroState s(1e-6);
    const double d = 2e-7;
    s.add(composition_for_diameter(d, {0.0, 1.0, 0.0}, db));
    auto b = bulk_optical_coeffs(s, db, optics);
    const auto q = mie_efficiencies(d, {1.85, 0.71}, 550e-9);
    const double area = std::numbers::pi * d * d / 4.0;
    CHECK(rel_err(b.b_abs, area * q.abs / 1e-6) < 1e-12);
    CHECK(rel_err(b.b_sca, area * q.sca / 1e-6) < 1e-12);
    REQUIRE(b.per_particle.size() == 1);
    CHECK(b.per_particle[0].id == s[0].id);
  }

  SUBCASE("invariant under doubling") {
    auto s = sampled(db, 400, 4, two_source());
    auto b0 = bulk_optical_coeffs(s, db, optics);
    state_rebalance(s, 600, 10000);
    auto b1 = bulk_optical_coeffs(s, db, optics);
    CHECK(rel_err(b1.b_sca, b0.b_sca) < 1e-13);
    CHECK(rel_err(b1.b_abs, b0.b_abs) < 1e-13);
    CHECK(b1.per_particle.size() == s.size());
  }

  SUBCASE("missing refractive index") {
    AeroState s(1e-6);
    s.add({1e-18, 0.0, 0.0});
    OpticsSpec partial{550e-9, {{"OC", {1.45, 0.0}}}, std::nullopt};
    CHECK_THROWS_AS(bulk_optical_coeffs(s, db, partial), SchemaError);
  }
}
