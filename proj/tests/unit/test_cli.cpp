#include <doctest.h>

#include <json.hpp>

#include "support/test_util.hpp"
#include "cli.hpp"

using namespace aeromc;
namespace fs = std::filesystem;

namespace {

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "aeromc");
  return cli::run_cli(args);
}

std::string plume() { return aeromc::test::scenario_path("urban_plume.json").string(); }

/// Copy of the urban plume scenario with a short run and a small population.
fs::path short_plume(const std::string& name, const std::function<void(nlohmann::json&)>& edit = {}) {
  auto doc = nlohmann::json::parse(aeromc::test::read_file(plume()));
  doc["run"]["duration"] = 7200;
  doc["run"]["n_target"] = 200;
  if (edit) edit(doc);
  auto dir = aeromc::test::temp_dir(name);
  auto path = dir / "scenario.json";
  std::ofstream(path) << doc.dump(2);
  return path;
}

}  // namespace

TEST_CASE("validate accepts the bundled scenarios") {
  CHECK(invoke({"validate", "--scenario", plume()}) == cli::ok);
  CHECK(invoke({"validate", "--scenario", aeromc::test::scenario_path("coag_constant_kernel.json").string()}) == cli::ok);
  CHECK(invoke({"validate", "--scenario", aeromc::test::scenario_path("equilibrium_demo.json").string()}) == cli::ok);
}

TEST_CASE("invalid input exits with code 1") {
  auto bad = short_plume("cli_bad", [](auto& d) { d["run"]["duration"] = 7210; });
  CHECK(invoke({"validate", "--scenario", bad.string()}) == cli::validation_failure);
  CHECK(invoke({"run", "--scenario", bad.string(), "--out", (bad.parent_path() / "out").string()}) ==
        cli::validation_failure);
  CHECK(!fs::exists(bad.parent_path() / "out" / "timeseries.jsonl"));
  CHECK(invoke({"run", "--scenario", plume(), "--out", "/tmp/x", "--frobnicate"}) == cli::validation_failure);
  CHECK(invoke({"run", "--scenario", "/nonexistent.json", "--out", "/tmp/x"}) == cli::validation_failure);
  CHECK(invoke({"run", "--scenario", plume(), "--out", "/tmp/x", "--format", "xml"}) == cli::validation_failure);
  CHECK(invoke({}) == cli::validation_failure);

  auto malformed = aeromc::test::temp_dir("cli_malformed") / "s.json";
  std::ofstream(malformed) << "{ not json";
  CHECK(invoke({"validate", "--scenario", malformed.string()}) == cli::validation_failure);
}

TEST_CASE("run writes the output tree") {
  auto scenario = short_plume("cli_run");
  auto out = scenario.parent_path() / "out";
  REQUIRE(invoke({"run", "--scenario", scenario.string(), "--out", out.string(), "--format", "csv"}) == cli::ok);
  CHECK(fs::exists(out / "timeseries.csv"));
  for (const char* t : {"0", "3600", "7200"}) {
    CHECK(fs::exists(out / (std::string("hist1d_") + t + ".csv")));
    CHECK(fs::exists(out / (std::string("particles_") + t + ".csv")));
  }
  CHECK(read_timeseries(out / "timeseries.csv").size() == 3);
}

TEST_CASE("seed and particle overrides") {
  auto scenario = short_plume("cli_overrides");
  cli::RunOptions o;
  o.scenario_path = scenario;
  o.seed = 99;
  o.particles = 50;
  auto sc = cli::load_with_overrides(o);
  CHECK(sc.seed == 99);
  CHECK(sc.n_target == 50);
  o.particles = 5;
  CHECK_THROWS_AS(cli::load_with_overrides(o), SemanticError);
  o.particles = 50;
  o.duration = 3600.0;
  CHECK(cli::load_with_overrides(o).duration == 3600.0);
}

TEST_CASE("same seed gives a byte-identical tree") {
  auto scenario = short_plume("cli_det");
  auto a = scenario.parent_path() / "a";
  auto b = scenario.parent_path() / "b";
  auto c = scenario.parent_path() / "c";
  REQUIRE(invoke({"run", "--scenario", scenario.string(), "--out", a.string(), "--seed", "7", "--quiet"}) == cli::ok);
  REQUIRE(invoke({"run", "--scenario", scenario.string(), "--out", b.string(), "--seed", "7", "--quiet"}) == cli::ok);
  REQUIRE(invoke({"run", "--scenario", scenario.string(), "--out", c.string(), "--seed", "8", "--quiet"}) == cli::ok);
  CHECK(aeromc::test::same_tree(a, b));
  CHECK(!aeromc::test::same_tree(a, c));
}

TEST_CASE("ensembles write one directory per seed") {
  auto scenario = short_plume("cli_ensemble", [](auto& d) { d["run"]["seed"] = 10; });
  auto out = scenario.parent_path() / "ens";
  REQUIRE(invoke({"run", "--scenario", scenario.string(), "--out", out.string(), "--ensemble", "3"}) == cli::ok);
  for (int s : {10, 11, 12}) CHECK(fs::exists(out / ("seed_" + std::to_string(s)) / "timeseries.jsonl"));

  // Members match the corresponding single runs.
  auto single = scenario.parent_path() / "single";
  REQUIRE(invoke({"run", "--scenario", scenario.string(), "--out", single.string(), "--seed", "11"}) == cli::ok);
  CHECK(aeromc::test::same_tree(single, out / "seed_11"));
}

TEST_CASE("sample and equilibrate") {
  auto scenario = short_plume("cli_sample");
  auto s = scenario.parent_path() / "sample";
  REQUIRE(invoke({"sample", "--scenario", scenario.string(), "--out", s.string()}) == cli::ok);
  auto parts = read_csv(s / "particles_0.csv");
  CHECK(!parts.rows.empty());
  const auto water = parts.column("mass_H2O");
  for (const auto& row : parts.rows) CHECK(row[water] == 0.0);

  auto e = scenario.parent_path() / "equil";
  REQUIRE(invoke({"equilibrate", "--scenario", scenario.string(), "--out", e.string(), "--rh", "0.9"}) == cli::ok);
  auto wet = read_csv(e / "particles_0.csv");
  double water_total = 0.0;
  for (const auto& row : wet.rows) water_total += row[water];
  CHECK(water_total > 0.0);

  CHECK(invoke({"equilibrate", "--scenario", scenario.string(), "--out", e.string(), "--rh", "1.2"}) ==
        cli::validation_failure);
  auto dry_only = short_plume("cli_nowater", [](auto& d) {
    auto& sp = d["species"];
    sp.erase(std::remove_if(sp.begin(), sp.end(), [](const auto& x) { return x.value("is_water", false); }), sp.end());
  });
  CHECK(invoke({"equilibrate", "--scenario", dry_only.string(), "--out", e.string(), "--rh", "0.5"}) ==
        cli::validation_failure);
}

TEST_CASE("thread cap honours the environment") {
  setenv("AEROMC_THREADS", "3", 1);
  CHECK(cli::thread_cap() == 3);
  setenv("AEROMC_THREADS", "0", 1);
  CHECK(cli::thread_cap() >= 1);
  unsetenv("AEROMC_THREADS");
  CHECK(cli::thread_cap() >= 1);
}

TEST_CASE("pipeline timings add up") {
  auto scenario = short_plume("cli_timings");
  cli::RunOptions o;
  o.scenario_path = scenario;
  o.out_dir = scenario.parent_path() / "out";
  o.progress = false;
  auto t = cli::run_pipeline(o);
  CHECK(t.total > 0.0);
  CHECK(t.fixed_overhead() <= t.total);
  CHECK(t.startup + t.simulation + t.fixed_io + t.particle_io <= t.total * 1.01);
}
