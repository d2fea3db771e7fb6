#include "aeromc/output.hpp"

#include <charconv>
#include <chrono>
#include <set>
#include <sstream>

#include <json.hpp>

#include "aeromc/error.hpp"

namespace aeromc {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

OutputFormat parse_output_format(std::string_view name) {
  if (name == "jsonl") return OutputFormat::jsonl;
  if (name == "csv") return OutputFormat::csv;
  throw ConfigError("unknown output format '" + std::string(name) + "' (expected jsonl or csv)");
}

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::jsonl ? "jsonl" : "csv";
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific);
  return std::string(buf, res.ptr);
}

std::string time_tag(double time) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), time, std::chars_format::general);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> gas_species(const Scenario& sc) {
  std::set<std::string> names;
  for (const auto& [n, v] : sc.initial_gas.mixing_ratios) names.insert(n);
  for (const auto& g : sc.gas_emissions) names.insert(g.species);
  for (const auto& [n, v] : sc.dilution.background_gas.mixing_ratios) names.insert(n);
  return {names.begin(), names.end()};
}

TimeSeriesRecord build_record(const SimState& sim, const BulkOptics* optics) {
  const auto& db = sim.scenario().db;
  const auto t = totals(sim.aero(), db);
  TimeSeriesRecord r;
  r.time = sim.clock();
  r.number_conc = t.number_conc;
  r.mass_conc = t.mass_conc;
  for (std::size_t i = 0; i < db.size(); ++i) r.species_mass_conc[db[i].name] = t.species_mass_conc[i];
  r.particle_count = sim.aero().size();
  r.comp_volume = sim.aero().comp_volume();
  r.gas = sim.gas().mixing_ratios;
  for (const auto& g : gas_species(sim.scenario())) r.gas.try_emplace(g, 0.0);
  if (optics) {
    r.b_sca = optics->b_sca;
    r.b_abs = optics->b_abs;
  }
  return r;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, const fs::path& path) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw Error("non-numeric field '" + text + "' in " + path.string());
  return v;
}

}  // namespace

TimeSeriesRecord make_record(const SimState& sim) {
  if (const auto& optics = sim.scenario().diagnostics.optics) {
    const auto bulk = bulk_optical_coeffs(sim.aero(), sim.scenario().db, *optics);
    return build_record(sim, &bulk);
  }
  return build_record(sim, nullptr);
}

OutputWriter::OutputWriter(fs::path dir, OutputFormat format, const Scenario& scenario)
    : dir_(std::move(dir)),
      format_(format),
      db_(scenario.db),
      diagnostics_(scenario.diagnostics),
      gas_names_(gas_species(scenario)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error("cannot create output directory '" + dir_.string() + "': " + ec.message());
  timeseries_ = open(format_ == OutputFormat::jsonl ? "timeseries.jsonl" : "timeseries.csv");
  if (format_ == OutputFormat::csv) {
    timeseries_ << "time,number_conc,mass_conc,particle_count,comp_volume";
    for (const auto& s : db_.records()) timeseries_ << ",mass_conc_" << s.name;
    for (const auto& g : gas_names_) timeseries_ << ",gas_" << g;
    if (diagnostics_.optics) timeseries_ << ",b_sca,b_abs";
    timeseries_ << '\n';
  }
  timeseries_.flush();
}

std::ofstream OutputWriter::open(const std::string& name) const {
  const fs::path path = dir_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

void OutputWriter::append_timeseries(const TimeSeriesRecord& r) {
  if (format_ == OutputFormat::jsonl) {
    Json j;
    j["time"] = r.time;
    j["number_conc"] = r.number_conc;
    j["mass_conc"] = r.mass_conc;
    j["particle_count"] = r.particle_count;
    j["comp_volume"] = r.comp_volume;
    Json species = Json::object();
    for (const auto& s : db_.records()) species[s.name] = r.species_mass_conc.at(s.name);
    j["species_mass_conc"] = std::move(species);
    Json gas = Json::object();
    for (const auto& g : gas_names_) {
      auto it = r.gas.find(g);
      gas[g] = it == r.gas.end() ? 0.0 : it->second;
    }
    j["gas"] = std::move(gas);
    if (r.b_sca) j["b_sca"] = *r.b_sca;
    if (r.b_abs) j["b_abs"] = *r.b_abs;
    timeseries_ << j.dump() << '\n';
  } else {
    timeseries_ << format_double(r.time) << ',' << format_double(r.number_conc) << ','
                << format_double(r.mass_conc) << ',' << r.particle_count << ','
                << format_double(r.comp_volume);
    for (const auto& s : db_.records()) timeseries_ << ',' << format_double(r.species_mass_conc.at(s.name));
    for (const auto& g : gas_names_) {
      auto it = r.gas.find(g);
      timeseries_ << ',' << format_double(it == r.gas.end() ? 0.0 : it->second);
    }
    if (r.b_sca) timeseries_ << ',' << format_double(*r.b_sca) << ',' << format_double(*r.b_abs);
    timeseries_ << '\n';
  }
  timeseries_.flush();
  if (!timeseries_) throw Error("write failed in '" + dir_.string() + "' (timeseries)");
}

void OutputWriter::write_snapshot(const SimState& sim) {
  using clock = std::chrono::steady_clock;
  const double t = sim.clock();
  if (!records_.empty() && !(t > records_.back().time))
    throw ConfigError("snapshot times must increase strictly");
  const auto start = clock::now();
  const auto& aero = sim.aero();
  const auto& grid = diagnostics_.hist_grid;
  const std::string tag = time_tag(t);

  // Everything that visits particles.
  std::optional<BulkOptics> optics;
  if (diagnostics_.optics) optics = bulk_optical_coeffs(aero, db_, *diagnostics_.optics);
  records_.push_back(build_record(sim, optics ? &*optics : nullptr));
  const auto dry = histogram_1d(aero, grid, db_, DiameterKind::dry);
  const auto wet = histogram_1d(aero, grid, db_, DiameterKind::wet);
  std::optional<Histogram2D> h2;
  if (!diagnostics_.fraction_species.empty())
    h2 = histogram_2d(aero, grid, db_, diagnostics_.fraction_species, DiameterKind::dry);

  {
    auto out = open("particles_" + tag + ".csv");
    out << "time,id,number_conc";
    for (const auto& s : db_.records()) out << ",mass_" << s.name;
    out << ",dry_diameter,wet_diameter\n";
    const std::string time_text = format_double(t);
    const std::string conc_text = format_double(aero.particle_number_conc());
    for (const auto& p : aero.particles()) {
      const auto d = particle_diameters(p, db_);
      out << time_text << ',' << p.id << ',' << conc_text;
      for (double m : p.masses) out << ',' << format_double(m);
      out << ',' << format_double(d.dry) << ',' << format_double(d.wet) << '\n';
    }
    if (!out) throw Error("write failed for particles_" + tag + ".csv in '" + dir_.string() + "'");
  }
  if (optics) {
    auto out = open("optics_" + tag + ".csv");
    out << "id,diameter,q_sca,q_abs\n";
    for (const auto& p : optics->per_particle) {
      out << p.id << ',' << format_double(p.diameter) << ',' << format_double(p.q_sca) << ','
          << format_double(p.q_abs) << '\n';
    }
    if (!out) throw Error("write failed for optics_" + tag + ".csv in '" + dir_.string() + "'");
  }
  const auto mid = clock::now();

  // Output whose size is fixed by the grids.
  append_timeseries(records_.back());
  {
    auto out = open("hist1d_" + tag + ".csv");
    out << "d_lower,d_upper,n_dry,n_wet\n";
    for (std::size_t i = 0; i < grid.n_diameter_bins(); ++i) {
      out << format_double(grid.diameter_edges[i]) << ',' << format_double(grid.diameter_edges[i + 1]) << ','
          << format_double(dry.values[i]) << ',' << format_double(wet.values[i]) << '\n';
    }
    if (!out) throw Error("write failed for hist1d_" + tag + ".csv in '" + dir_.string() + "'");
  }
  if (h2) {
    const auto& f = *grid.fraction_edges;
    auto out = open("hist2d_" + tag + ".csv");
    out << "d_lower,d_upper,f_lower,f_upper,n\n";
    for (std::size_t r = 0; r < h2->rows; ++r) {
      for (std::size_t c = 0; c < h2->cols; ++c) {
        out << format_double(grid.diameter_edges[r]) << ',' << format_double(grid.diameter_edges[r + 1]) << ','
            << format_double(f[c]) << ',' << format_double(f[c + 1]) << ',' << format_double(h2->at(r, c))
            << '\n';
      }
    }
    if (!out) throw Error("write failed for hist2d_" + tag + ".csv in '" + dir_.string() + "'");
  }
  const auto end_time = clock::now();
  timings_.per_particle += std::chrono::duration<double>(mid - start).count();
  timings_.fixed += std::chrono::duration<double>(end_time - mid).count();
}

std::vector<TimeSeriesRecord> write_outputs(std::span<const SimState> snapshots, const fs::path& out_dir,
                                            OutputFormat format) {
  if (snapshots.empty()) throw ConfigError("no snapshots to write");
  OutputWriter writer(out_dir, format, snapshots.front().scenario());
  for (const auto& s : snapshots) writer.write_snapshot(s);
  return writer.records();
}

std::vector<TimeSeriesRecord> run_to_completion(SimState& sim, OutputWriter* writer) {
  std::vector<TimeSeriesRecord> records;
  auto emit = [&] {
    if (writer) {
      writer->write_snapshot(sim);
      records.push_back(writer->records().back());
    } else {
      records.push_back(make_record(sim));
    }
  };
  const std::size_t interval = sim.scenario().steps_in(sim.scenario().diagnostics.output_interval);
  emit();
  while (!sim.finished()) {
    step(sim);
    if (sim.step_index() % interval == 0 || sim.finished()) emit();
  }
  return records;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw NotFoundError("no column '" + std::string(name) + "'");
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error("empty CSV file '" + path.string() + "'");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size())
      throw Error("row with " + std::to_string(fields.size()) + " fields in '" + path.string() + "'");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_number(f, path));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<TimeSeriesRecord> read_timeseries(const fs::path& path) {
  std::vector<TimeSeriesRecord> out;
  if (path.extension() == ".jsonl") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Json j;
      try {
        j = Json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw Error("malformed record in '" + path.string() + "': " + e.what());
      }
      TimeSeriesRecord r;
      r.time = j.at("time").get<double>();
      r.number_conc = j.at("number_conc").get<double>();
      r.mass_conc = j.at("mass_conc").get<double>();
      r.particle_count = j.at("particle_count").get<std::size_t>();
      r.comp_volume = j.at("comp_volume").get<double>();
      for (const auto& [k, v] : j.at("species_mass_conc").items()) r.species_mass_conc[k] = v.get<double>();
      for (const auto& [k, v] : j.at("gas").items()) r.gas[k] = v.get<double>();
      if (j.contains("b_sca")) r.b_sca = j["b_sca"].get<double>();
      if (j.contains("b_abs")) r.b_abs = j["b_abs"].get<double>();
      out.push_back(std::move(r));
    }
    return out;
  }

  const auto table = read_csv(path);
  for (const auto& row : table.rows) {
    TimeSeriesRecord r;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      const auto& h = table.header[c];
      const double v = row[c];
      if (h == "time") r.time = v;
      else if (h == "number_conc") r.number_conc = v;
      else if (h == "mass_conc") r.mass_conc = v;
      else if (h == "particle_count") r.particle_count = static_cast<std::size_t>(v);
      else if (h == "comp_volume") r.comp_volume = v;
      else if (h == "b_sca") r.b_sca = v;
      else if (h == "b_abs") r.b_abs = v;
      else if (h.starts_with("mass_conc_")) r.species_mass_conc[h.substr(10)] = v;
      else if (h.starts_with("gas_")) r.gas[h.substr(4)] = v;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace aeromc
