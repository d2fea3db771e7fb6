#include <doctest.h>

#include "support/test_util.hpp"

using namespace aeromc;
using aeromc::test::rel_err;

namespace {

AeroMode lognormal(double n, double dgm, double sigma, std::map<std::string, double> f = {{"OC", 1.0}}) {
  return AeroMode("m", ModeType::log_normal, n, dgm, sigma, std::move(f));
}

}  // namespace

TEST_CASE("mode construction validates parameters") {
  CHECK_THROWS_AS(lognormal(-1.0, 1e-7, 1.5), SemanticError);
  CHECK_THROWS_AS(lognormal(1e9, 0.0, 1.5), SemanticError);
  CHECK_THROWS_AS(lognormal(1e9, 1e-7, 1.0), SemanticError);
  CHECK_THROWS_AS(lognormal(1e9, 1e-7, 1.5, {}), SemanticError);
  CHECK_THROWS_AS(lognormal(1e9, 1e-7, 1.5, {{"OC", -0.5}, {"BC", 1.5}}), SemanticError);
  CHECK_NOTHROW(AeroMode("mono", ModeType::mono, 1e9, 1e-7, 1.0, {{"OC", 1.0}}));

  auto m = lognormal(1e9, 1e-7, 1.5, {{"OC", 1.0}, {"BC", 3.0}});
  CHECK(m.mass_fracs().at("BC") == 0.75);
}

TEST_CASE("pdf peak height") {
  const double n = 1e9, sigma = 1.8, dgm = 5e-8;
  auto m = lognormal(n, dgm, sigma);
  const double peak = n / (std::sqrt(2.0 * std::numbers::pi) * std::log10(sigma));
  CHECK(rel_err(mode_pdf(m, dgm), peak) < 1e-14);
  CHECK(mode_pdf(m, dgm * 1.1) < peak);
  CHECK(mode_pdf(m, dgm / 1.1) < peak);
}

TEST_CASE("pdf integrates to the number concentration") {
  for (double sigma : {1.2, 1.6, 2.2}) {
    auto m = lognormal(3e9, 8e-8, sigma);
    const double lo = std::log10(8e-8) - 10 * std::log10(sigma);
    const double hi = std::log10(8e-8) + 10 * std::log10(sigma);
    const int n = 4000;
    const double h = (hi - lo) / n;
    double integral = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      integral += w * mode_pdf(m, std::pow(10.0, lo + i * h));
    }
    integral *= h;
    CHECK(rel_err(integral, 3e9) < 1e-3);
  }
}

TEST_CASE("pdf edge cases") {
  CHECK(mode_pdf(lognormal(0.0, 1e-7, 1.5), 1e-7) == 0.0);
  AeroMode mono("mono", ModeType::mono, 1e9, 1e-7, 1.0, {{"OC", 1.0}});
  CHECK_THROWS_AS(mode_pdf(mono, 1e-7), UnsupportedError);
  CHECK_THROWS_AS(mode_pdf(lognormal(1e9, 1e-7, 1.5), 0.0), DomainError);
}

TEST_CASE("mono mode sampling reproduces diameter and fractions") {
  auto db = aeromc::test::carbon_db();
  AeroState s(1e-6, 4);
  AeroDist dist{{AeroMode("mono", ModeType::mono, 1e8, 1e-7, 1.0, {{"OC", 0.3}, {"BC", 0.7}})}};
  auto ids = dist_sample(s, dist, db, {1.0, CountSampling::rounded});
  CHECK(ids.size() == 100);
  auto bc = MassSelector::of(db, {"BC"});
  for (const auto& p : s.particles()) {
    CHECK(rel_err(particle_diameters(p, db).dry, 1e-7) < 1e-12);
    CHECK(rel_err(particle_masses(p, db, bc).fraction, 0.7) < 1e-15);
    CHECK(p.masses[2] == 0.0);
  }
}

TEST_CASE("log-normal sample moments") {
  auto db = aeromc::test::carbon_db();
  const double dgm = 1e-7, sigma = 1.6;
  AeroState s(1e-4, 17);
  AeroDist dist{{lognormal(1e9, dgm, sigma)}};
  dist_sample(s, dist, db, {1.0, CountSampling::rounded});
  REQUIRE(s.size() == 100000);
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& p : s.particles()) {
    const double x = std::log(particle_diameters(p, db).dry);
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(s.size());
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  const double ls = std::log(sigma);
  CHECK(std::abs(mean - std::log(dgm)) < 3.0 * ls / std::sqrt(n));
  CHECK(std::abs(sd - ls) < 3.0 * ls / std::sqrt(2.0 * n));
}

TEST_CASE("sample counts are Poisson around num_conc * V") {
  auto db = aeromc::test::carbon_db();
  AeroDist dist{{lognormal(2e8, 1e-7, 1.5)}};
  const int trials = 400;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    AeroState s(1e-6, 100 + t);
    const double c = static_cast<double>(dist_sample(s, dist, db).size());
    sum += c;
    sum_sq += c * c;
  }
  const double mean = sum / trials;
  const double var = sum_sq / trials - mean * mean;
  CHECK(std::abs(mean - 200.0) < 3.0 * std::sqrt(200.0 / trials));
  CHECK(rel_err(var, 200.0) < 0.25);
}

TEST_CASE("two-source population keeps distinct compositions") {
  auto db = aeromc::test::carbon_db();
  AeroState s(1e-6, 8);
  AeroDist dist{{lognormal(5e8, 5e-8, 1.5, {{"OC", 1.0}}),
                 lognormal(5e8, 8e-8, 1.5, {{"OC", 0.3}, {"BC", 0.7}})}};
  dist_sample(s, dist, db);
  auto bc = MassSelector::of(db, {"BC"});
  std::size_t pure = 0, mixed = 0;
  for (const auto& p : s.particles()) {
    const double f = particle_masses(p, db, bc).fraction;
    if (f == 0.0) ++pure;
    else if (rel_err(f, 0.7) < 1e-15) ++mixed;
  }
  CHECK(pure + mixed == s.size());
  CHECK(pure > 0);
  CHECK(mixed > 0);
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  auto db = aeromc::test::carbon_db();
  AeroDist dist{{lognormal(1e9, 1e-7, 1.8, {{"OC", 0.5}, {"BC", 0.5}})}};
  AeroState a(1e-6, 42), b(1e-6, 42), c(1e-6, 43);
  dist_sample(a, dist, db);
  dist_sample(b, dist, db);
  dist_sample(c, dist, db);
  CHECK(a == b);
  CHECK(!(a == c));
}

TEST_CASE("sampling errors") {
  auto db = aeromc::test::carbon_db();
  AeroState s(1e-6);
  AeroDist dist{{lognormal(1e9, 1e-7, 1.5, {{"SO4", 1.0}})}};
  CHECK_THROWS_AS(dist_sample(s, dist, db), SchemaError);
  CHECK(s.empty());
  AeroDist zero{{lognormal(0.0, 1e-7, 1.5)}};
  CHECK(dist_sample(s, zero, db).empty());
  CHECK(dist_sample(s, AeroDist{}, db).empty());
}

TEST_CASE("scale multiplies the expected count") {
  auto db = aeromc::test::carbon_db();
  AeroState s(1e-6);
  AeroDist dist{{lognormal(1e9, 1e-7, 1.5)}};
  CHECK(dist_sample(s, dist, db, {0.25, CountSampling::rounded}).size() == 250);
}
