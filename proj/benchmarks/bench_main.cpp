#include <benchmark/benchmark.h>

#include <cmath>

#include "aeromc/aeromc.hpp"

using namespace aeromc;

namespace {

SpeciesDatabase bench_db() {
  return SpeciesDatabase({{"salt", 2160.0, 1.1, false}, {"OC", 1000.0, 0.1, false}, {"H2O", 1000.0, 0.0, true}});
}

AeroState population(std::size_t n, std::uint64_t seed, double n_conc = 1e12) {
  const auto db = bench_db();
  AeroState s(static_cast<double>(n) / n_conc, seed);
  AeroDist dist{{AeroMode("m", ModeType::log_normal, n_conc, 8e-8, 1.7, {{"salt", 0.4}, {"OC", 0.6}})}};
  dist_sample(s, dist, db, {1.0, CountSampling::rounded});
  return s;
}

void BM_CoagStep(benchmark::State& state) {
  const auto db = bench_db();
  const auto base = population(static_cast<std::size_t>(state.range(0)), 1);
  const EnvState env{290.0, 1e5, 0.0, 0.0};
  Coagulator coag(BrownianKernel{}, BinGrid::log_spaced(1e-10, 1e-3, 140), db);
  coag.majorant(0, 0, env);  // build the majorant table outside the timed region
  for (auto _ : state) {
    state.PauseTiming();
    AeroState s = base;
    state.ResumeTiming();
    benchmark::DoNotOptimize(coag.step(s, env, 60.0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CoagStep)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_Mie(benchmark::State& state) {
  const double x = std::pow(10.0, static_cast<double>(state.range(0)) / 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(mie_efficiencies_x(x, {1.5, 0.01}));
  state.SetLabel("x = " + std::to_string(x));
}
BENCHMARK(BM_Mie)->DenseRange(-4, 6, 2);

void BM_EquilibrateState(benchmark::State& state) {
  const auto db = bench_db();
  const auto base = population(static_cast<std::size_t>(state.range(0)), 2);
  const EnvState env{295.0, 101325.0, 0.82, 0.0};
  for (auto _ : state) {
    AeroState s = base;
    equilibrate_state(s, env, db);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EquilibrateState)->Arg(1000)->Arg(10000);

void BM_Sample(benchmark::State& state) {
  const auto db = bench_db();
  AeroDist dist{{AeroMode("m", ModeType::log_normal, 1e9, 8e-8, 1.7, {{"salt", 0.4}, {"OC", 0.6}})}};
  const auto n = static_cast<double>(state.range(0));
  for (auto _ : state) {
    AeroState s(n / 1e9, 3);
    benchmark::DoNotOptimize(dist_sample(s, dist, db));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sample)->Arg(1000)->Arg(100000);

void BM_BulkOptics(benchmark::State& state) {
  const auto db = bench_db();
  auto s = population(static_cast<std::size_t>(state.range(0)), 4);
  equilibrate_state(s, EnvState{295.0, 101325.0, 0.9, 0.0}, db);
  OpticsSpec optics{550e-9, {{"salt", {1.54, 0.0}}, {"OC", {1.45, 0.001}}, {"H2O", {1.33, 0.0}}}, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(bulk_optical_coeffs(s, db, optics));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BulkOptics)->Arg(10000);

}  // namespace
