#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aeromc/output.hpp"
#include "aeromc/scenario.hpp"

namespace aeromc::cli {

enum ExitCode : int { ok = 0, validation_failure = 1, runtime_failure = 2 };

struct RunOptions {
  std::filesystem::path scenario_path;
  std::filesystem::path out_dir;
  OutputFormat format = OutputFormat::jsonl;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> particles;
  /// Programmatic only; not exposed as a flag.
  std::optional<double> duration;
  bool progress = true;
};

/// Wall-clock split of one `run` invocation, in seconds. `fixed_overhead`
/// covers work whose cost does not depend on the particle count: reading and
/// validating the scenario, preparing the output tree, and writing the
/// timeseries and histogram files.
struct PipelineTimings {
  double startup = 0.0;
  double simulation = 0.0;
  double fixed_io = 0.0;
  double particle_io = 0.0;
  double total = 0.0;

  double fixed_overhead() const { return startup + fixed_io; }
};

/// Applies command-line overrides (seed, particle count, duration) to a
/// parsed scenario and re-validates it.
Scenario load_with_overrides(const RunOptions& options);

/// Loads, runs and writes one scenario. Throws on failure.
PipelineTimings run_pipeline(const RunOptions& options);

/// Threads used for ensembles: AEROMC_THREADS if set and positive, otherwise
/// the hardware concurrency.
unsigned thread_cap();

/// Entry point shared by the executable and the tests. Returns the process
/// exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace aeromc::cli
