// Self-checks of the reference sectional solver used by the acceptance suite.
#include <doctest.h>

#include "oracles/sectional.hpp"
#include "support/test_util.hpp"

using aeromc::test::rel_err;

TEST_CASE("oracle kernel reproduces the frozen reference values") {
  CHECK(rel_err(oracle::fuchs::kernel(1e-7, 1e-7, 1000, 1000, 295, 101325), 1.441677850643801e-15) < 1e-12);
  CHECK(rel_err(oracle::fuchs::kernel(1e-8, 1e-6, 1000, 1000, 295, 101325), 3.218923670923797e-13) < 1e-12);
}

TEST_CASE("sectional solver matches the constant-kernel solution") {
  const double k0 = 1e-12, n0 = 1e10;
  oracle::Sectional s(oracle::Sectional::log_pivots(1e-7, 1e-5, 100), [&](double, double) { return k0; });
  std::vector<double> N(100, 0.0);
  N[0] = n0;
  const double t = 2.0 / (k0 * n0);
  auto out = s.integrate(N, t, 1.0);
  CHECK(rel_err(oracle::total(out), 0.5 * n0) < 1e-6);
}

TEST_CASE("sectional solver conserves volume") {
  oracle::Sectional s(oracle::Sectional::log_pivots(5e-9, 5e-6, 100), [](double a, double b) {
    auto d = [](double v) { return std::cbrt(6.0 * v / std::numbers::pi); };
    return oracle::fuchs::kernel(d(a), d(b), 1000, 1000, 295, 101325);
  });
  auto N0 = s.lognormal(1e12, 1e-7, 1.5);
  auto N1 = s.integrate(N0, 3600.0, 2.0);
  double v0 = 0.0, v1 = 0.0;
  for (std::size_t k = 0; k < N0.size(); ++k) {
    v0 += N0[k] * s.pivots()[k];
    v1 += N1[k] * s.pivots()[k];
  }
  CHECK(rel_err(v1, v0) < 1e-10);
  CHECK(oracle::total(N1) < oracle::total(N0));
  CHECK(rel_err(oracle::total(N0), 1e12) < 1e-12);
}
