#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aeromc/scenario.hpp"

namespace aeromc {

enum class OutputFormat { jsonl, csv };

/// Throws ConfigError for anything but "jsonl" / "csv".
OutputFormat parse_output_format(std::string_view name);
std::string_view to_string(OutputFormat format);

struct TimeSeriesRecord {
  double time = 0.0;
  double number_conc = 0.0;
  double mass_conc = 0.0;
  std::map<std::string, double> species_mass_conc;
  std::size_t particle_count = 0;
  double comp_volume = 0.0;
  std::map<std::string, double> gas;
  std::optional<double> b_sca;
  std::optional<double> b_abs;

  bool operator==(const TimeSeriesRecord&) const = default;
};

TimeSeriesRecord make_record(const SimState& sim);

/// Shortest decimal text that parses back to the same double, in scientific
/// notation.
std::string format_double(double value);
/// File-name tag for a snapshot time, e.g. 3600 -> "3600".
std::string time_tag(double time);

/// Streams one snapshot per call into `dir`:
///   timeseries.{jsonl,csv}   one TimeSeriesRecord per snapshot
///   hist1d_<t>.csv           d_lower,d_upper,n_dry,n_wet
///   hist2d_<t>.csv           d_lower,d_upper,f_lower,f_upper,n (when fraction species set)
///   particles_<t>.csv        time,id,number_conc,mass_<species>...,dry_diameter,wet_diameter
///   optics_<t>.csv           id,diameter,q_sca,q_abs (when optics configured)
class OutputWriter {
 public:
  /// Creates `dir` if needed. Throws Error with path context on failure.
  OutputWriter(std::filesystem::path dir, OutputFormat format, const Scenario& scenario);

  /// Throws ConfigError if time does not increase strictly.
  void write_snapshot(const SimState& sim);

  const std::vector<TimeSeriesRecord>& records() const noexcept { return records_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }

  /// Accumulated wall time (s) spent in write_snapshot, split into work that
  /// visits particles and output whose size is fixed by the grids.
  struct Timings {
    double per_particle = 0.0;
    double fixed = 0.0;
  };
  const Timings& timings() const noexcept { return timings_; }

 private:
  std::ofstream open(const std::string& name) const;
  void append_timeseries(const TimeSeriesRecord& record);

  std::filesystem::path dir_;
  OutputFormat format_;
  SpeciesDatabase db_;
  DiagnosticsConfig diagnostics_;
  std::vector<std::string> gas_names_;
  std::ofstream timeseries_;
  std::vector<TimeSeriesRecord> records_;
  Timings timings_;
};

/// Writes the given snapshots (in time order) with a fresh OutputWriter.
std::vector<TimeSeriesRecord> write_outputs(std::span<const SimState> snapshots,
                                            const std::filesystem::path& out_dir,
                                            OutputFormat format);

/// Runs `sim` to completion, writing a snapshot at t = 0, every
/// output_interval, and at the end of the run.
std::vector<TimeSeriesRecord> run_to_completion(SimState& sim, OutputWriter* writer);

/// Numeric CSV as written by OutputWriter.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
std::vector<TimeSeriesRecord> read_timeseries(const std::filesystem::path& path);

}  // namespace aeromc
