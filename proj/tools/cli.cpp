#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "aeromc/equilibrium.hpp"
#include "aeromc/error.hpp"
#include "aeromc/scenario_io.hpp"

namespace aeromc::cli {

namespace fs = std::filesystem;
using steady = std::chrono::steady_clock;

namespace {

double seconds_since(steady::time_point t0) {
  return std::chrono::duration<double>(steady::now() - t0).count();
}

void report_progress(const SimState& sim) {
  std::cerr << "aeromc: t = " << sim.clock() << " s, " << sim.aero().size() << " particles, N = "
            << sim.aero().number_conc() << " m^-3\n";
}

}  // namespace

Scenario load_with_overrides(const RunOptions& options) {
  Scenario sc = load_scenario_file(options.scenario_path);
  if (options.seed) sc.seed = *options.seed;
  if (options.particles) sc.n_target = *options.particles;
  if (options.duration) sc.duration = *options.duration;
  if (options.particles && *options.particles < 10)
    throw SemanticError("--particles", "particle count must be >= 10");
  sc.validate();
  return sc;
}

PipelineTimings run_pipeline(const RunOptions& options) {
  PipelineTimings timings;
  const auto t_start = steady::now();

  Scenario sc = load_with_overrides(options);
  OutputWriter writer(options.out_dir, options.format, sc);
  timings.startup = seconds_since(t_start);

  SimState sim(std::move(sc));
  const std::size_t interval = sim.scenario().steps_in(sim.scenario().diagnostics.output_interval);
  writer.write_snapshot(sim);
  if (options.progress) report_progress(sim);
  while (!sim.finished()) {
    step(sim);
    if (sim.step_index() % interval == 0 || sim.finished()) {
      writer.write_snapshot(sim);
      if (options.progress) report_progress(sim);
    }
  }

  timings.total = seconds_since(t_start);
  timings.fixed_io = writer.timings().fixed;
  timings.particle_io = writer.timings().per_particle;
  timings.simulation = timings.total - timings.startup - timings.fixed_io - timings.particle_io;
  return timings;
}

unsigned thread_cap() {
  if (const char* env = std::getenv("AEROMC_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Args {
  std::string scenario;
  std::string out;
  std::string format = "jsonl";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> particles;
  std::size_t ensemble = 1;
  double rh = 0.0;
  bool quiet = false;
};

RunOptions to_options(const Args& a) {
  RunOptions o;
  o.scenario_path = a.scenario;
  o.out_dir = a.out;
  o.format = parse_output_format(a.format);
  o.seed = a.seed;
  o.particles = a.particles;
  o.progress = !a.quiet;
  return o;
}

int cmd_validate(const Args& a) {
  const Scenario sc = load_scenario_file(a.scenario);
  std::cerr << "aeromc: " << a.scenario << " is valid (" << sc.db.size() << " species, "
            << sc.steps_in(sc.duration) << " steps)\n";
  return ok;
}

int cmd_run(const Args& a) {
  RunOptions base = to_options(a);
  if (a.ensemble <= 1) {
    const auto t = run_pipeline(base);
    if (!a.quiet)
      std::cerr << "aeromc: run finished in " << t.total << " s (startup " << t.startup << " s, output "
                << t.fixed_io + t.particle_io << " s)\n";
    return ok;
  }

  // Validate once up front so that configuration errors map to exit code 1.
  const std::uint64_t first_seed = load_with_overrides(base).seed;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < a.ensemble; k = next++) {
      RunOptions o = base;
      o.seed = first_seed + k;
      o.out_dir = base.out_dir / ("seed_" + std::to_string(*o.seed));
      o.progress = false;
      try {
        const auto t = run_pipeline(o);
        std::lock_guard lock(log_mutex);
        std::cerr << "aeromc: seed " << *o.seed << " finished in " << t.total << " s\n";
      } catch (const std::exception& e) {
        std::lock_guard lock(log_mutex);
        std::cerr << "aeromc: seed " << *o.seed << " failed: " << e.what() << '\n';
        failed = true;
      }
    }
  };
  const unsigned n_threads = std::min<std::size_t>(thread_cap(), a.ensemble);
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  return failed ? runtime_failure : ok;
}

int cmd_sample(const Args& a) {
  const RunOptions o = to_options(a);
  SimState sim(load_with_overrides(o));
  OutputWriter writer(o.out_dir, o.format, sim.scenario());
  writer.write_snapshot(sim);
  std::cerr << "aeromc: sampled " << sim.aero().size() << " particles\n";
  return ok;
}

int cmd_equilibrate(const Args& a) {
  const RunOptions o = to_options(a);
  SimState sim(load_with_overrides(o));
  if (!(a.rh >= 0.0) || a.rh >= 1.0)
    throw SemanticError("--rh", "relative humidity must be in [0, 1), got " + std::to_string(a.rh));
  sim.env().relative_humidity = a.rh;
  equilibrate_state(sim.aero(), sim.env(), sim.scenario().db);
  OutputWriter writer(o.out_dir, o.format, sim.scenario());
  writer.write_snapshot(sim);
  std::cerr << "aeromc: equilibrated " << sim.aero().size() << " particles at RH " << a.rh << '\n';
  return ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Particle-resolved stochastic aerosol box model", "aeromc"};
  app.require_subcommand(1);
  Args a;

  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--scenario", a.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    if (with_out) {
      sub->add_option("--out", a.out, "Output directory")->required();
      sub->add_option("--seed", a.seed, "Override run.seed");
      sub->add_option("--particles", a.particles, "Override run.n_target");
      sub->add_option("--format", a.format, "Timeseries format")->check(CLI::IsMember({"jsonl", "csv"}));
    }
  };

  auto* run = app.add_subcommand("run", "Run a scenario and write outputs");
  add_common(run, true);
  run->add_option("--ensemble", a.ensemble, "Run N consecutive seeds concurrently")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", a.quiet, "Suppress per-snapshot progress lines");
  auto* sample = app.add_subcommand("sample", "Write the initial particle population only");
  add_common(sample, true);
  auto* equilibrate = app.add_subcommand("equilibrate", "Equilibrate the initial population with water vapour");
  add_common(equilibrate, true);
  equilibrate->add_option("--rh", a.rh, "Relative humidity (saturation ratio, < 1)")->required();
  auto* validate = app.add_subcommand("validate", "Validate a scenario document");
  add_common(validate, false);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, std::cerr, std::cerr);
    return rc == 0 ? ok : validation_failure;
  }

  try {
    if (*run) return cmd_run(a);
    if (*sample) return cmd_sample(a);
    if (*equilibrate) return cmd_equilibrate(a);
    if (*validate) return cmd_validate(a);
  } catch (const ValidationError& e) {
    std::cerr << "aeromc: invalid scenario: " << e.what() << '\n';
    return validation_failure;
  } catch (const RangeError& e) {
    std::cerr << "aeromc: invalid argument: " << e.what() << '\n';
    return validation_failure;
  } catch (const UnsupportedError& e) {
    std::cerr << "aeromc: unsupported: " << e.what() << '\n';
    return validation_failure;
  } catch (const std::exception& e) {
    std::cerr << "aeromc: error: " << e.what() << '\n';
    return runtime_failure;
  }
  return validation_failure;
}

}  // namespace aeromc::cli
