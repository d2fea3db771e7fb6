#include "aeromc/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "aeromc/error.hpp"

namespace aeromc {

using Json = nlohmann::ordered_json;

namespace {

std::string show(const Json& j) { return j.dump(); }

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object, got " + show(j));
  return j;
}

const Json& expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array, got " + show(j));
  return j;
}

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) throw SchemaError(join(path, k), "unknown key '" + k + "'");
  }
}

const Json& required(const Json& j, const std::string& path, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(join(path, key), "required key is missing");
  return *it;
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number, got " + show(j));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SemanticError(path, "value must be finite");
  return v;
}

double number(const Json& j, const std::string& path, const std::string& key) {
  return as_number(required(j, path, key), join(path, key));
}

double number_or(const Json& j, const std::string& path, const std::string& key, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_number(*it, join(path, key));
}

std::uint64_t unsigned_or(const Json& j, const std::string& path, const std::string& key,
                          std::uint64_t fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0))
    throw SchemaError(join(path, key), "expected a non-negative integer, got " + show(*it));
  return it->get<std::uint64_t>();
}

bool bool_or(const Json& j, const std::string& path, const std::string& key, bool fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) throw SchemaError(join(path, key), "expected a boolean, got " + show(*it));
  return it->get<bool>();
}

std::string string_field(const Json& j, const std::string& path, const std::string& key) {
  const auto& v = required(j, path, key);
  if (!v.is_string()) throw SchemaError(join(path, key), "expected a string, got " + show(v));
  return v.get<std::string>();
}

void require(bool ok, const std::string& path, const Json& value, const std::string& constraint) {
  if (!ok) throw SemanticError(path, "value " + show(value) + " violates: " + constraint);
}

// Re-raises a validation error from a core constructor with an absolute path.
template <class F>
auto with_prefix(const std::string& prefix, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SemanticError& e) {
    throw SemanticError(join(prefix, e.path()), std::string(e.what()).substr(e.path().size() + 2));
  } catch (const SchemaError& e) {
    throw SchemaError(join(prefix, e.path()), std::string(e.what()).substr(e.path().size() + 2));
  }
}

SpeciesDatabase parse_species(const Json& root) {
  const std::string path = "species";
  const auto& arr = expect_array(required(root, "", path), path);
  std::vector<SpeciesRecord> records;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = index(path, i);
    const auto& s = expect_object(arr[i], p);
    allow_keys(s, p, {"name", "density", "kappa", "is_water"});
    SpeciesRecord r;
    r.name = string_field(s, p, "name");
    r.density = number(s, p, "density");
    r.kappa = number_or(s, p, "kappa", 0.0);
    r.is_water = bool_or(s, p, "is_water", false);
    require(r.density > 0.0, join(p, "density"), s["density"], "density > 0");
    if (s.contains("kappa")) require(r.kappa >= 0.0, join(p, "kappa"), s["kappa"], "kappa >= 0");
    records.push_back(std::move(r));
  }
  return SpeciesDatabase(std::move(records));
}

AeroMode parse_mode(const Json& j, const std::string& path) {
  expect_object(j, path);
  allow_keys(j, path, {"name", "mode_type", "num_conc", "geom_mean_diam", "geom_std_dev", "mass_fracs"});
  const std::string name = j.contains("name") ? string_field(j, path, "name") : std::string();
  const std::string type_name = j.contains("mode_type") ? string_field(j, path, "mode_type") : "log_normal";
  ModeType type;
  if (type_name == "log_normal") {
    type = ModeType::log_normal;
  } else if (type_name == "mono") {
    type = ModeType::mono;
  } else {
    throw SchemaError(join(path, "mode_type"), "expected \"log_normal\" or \"mono\", got " + show(j["mode_type"]));
  }
  const double num_conc = number(j, path, "num_conc");
  require(num_conc >= 0.0, join(path, "num_conc"), j["num_conc"], "num_conc >= 0");
  const double dgm = number(j, path, "geom_mean_diam");
  require(dgm > 0.0, join(path, "geom_mean_diam"), j["geom_mean_diam"], "geom_mean_diam > 0");
  double sigma = 1.0;
  if (type == ModeType::log_normal) {
    sigma = number(j, path, "geom_std_dev");
    require(sigma > 1.0, join(path, "geom_std_dev"), j["geom_std_dev"], "geom_std_dev > 1 for log_normal");
  } else if (j.contains("geom_std_dev")) {
    sigma = as_number(j["geom_std_dev"], join(path, "geom_std_dev"));
  }

  const std::string fpath = join(path, "mass_fracs");
  const auto& fj = expect_object(required(j, path, "mass_fracs"), fpath);
  require(!fj.empty(), fpath, fj, "at least one species");
  std::map<std::string, double> fracs;
  double sum = 0.0;
  for (const auto& [species, v] : fj.items()) {
    const double f = as_number(v, join(fpath, species));
    require(f >= 0.0, join(fpath, species), v, "mass fraction >= 0");
    fracs[species] = f;
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "mass fractions " << show(fj) << " sum to " << sum << ", expected 1 (tolerance 1e-6)";
    throw SemanticError(fpath, msg.str());
  }
  return with_prefix(path, [&] { return AeroMode(name, type, num_conc, dgm, sigma, std::move(fracs)); });
}

AeroDist parse_dist(const Json& j, const std::string& path) {
  expect_object(j, path);
  allow_keys(j, path, {"modes"});
  AeroDist dist;
  const auto& modes = expect_array(required(j, path, "modes"), join(path, "modes"));
  for (std::size_t i = 0; i < modes.size(); ++i)
    dist.modes.push_back(parse_mode(modes[i], index(join(path, "modes"), i)));
  return dist;
}

GasState parse_gas_map(const Json& j, const std::string& path) {
  expect_object(j, path);
  GasState gas;
  for (const auto& [name, v] : j.items()) {
    const double x = as_number(v, join(path, name));
    require(x >= 0.0, join(path, name), v, "mixing ratio >= 0");
    gas.mixing_ratios[name] = x;
  }
  return gas;
}

std::complex<double> parse_complex(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(path, "expected [n, k], got " + show(j));
  const double n = as_number(j[0], index(path, 0));
  const double k = as_number(j[1], index(path, 1));
  require(n >= 1.0, index(path, 0), j[0], "real refractive index >= 1");
  require(k >= 0.0, index(path, 1), j[1], "imaginary refractive index >= 0");
  return {n, k};
}

struct GridSpec {
  double min, max;
  std::size_t n_bins;
};

GridSpec parse_grid(const Json& j, const std::string& path, GridSpec fallback) {
  expect_object(j, path);
  allow_keys(j, path, {"min", "max", "n_bins"});
  GridSpec g{number_or(j, path, "min", fallback.min), number_or(j, path, "max", fallback.max),
             static_cast<std::size_t>(unsigned_or(j, path, "n_bins", fallback.n_bins))};
  require(g.min > 0.0, join(path, "min"), Json(g.min), "min > 0");
  require(g.max > g.min, join(path, "max"), Json(g.max), "max > min");
  require(g.n_bins >= 1, join(path, "n_bins"), Json(g.n_bins), "n_bins >= 1");
  return g;
}

Kernel parse_kernel(const Json& j, const std::string& path) {
  expect_object(j, path);
  allow_keys(j, path, {"type", "value"});
  const std::string type = string_field(j, path, "type");
  if (type == "brownian") {
    if (j.contains("value")) throw SchemaError(join(path, "value"), "brownian kernel takes no value");
    return BrownianKernel{};
  }
  if (type == "constant" || type == "additive") {
    const double v = number(j, path, "value");
    require(v > 0.0, join(path, "value"), j["value"], "kernel parameter > 0");
    if (type == "constant") return ConstantKernel{v};
    return AdditiveKernel{v};
  }
  throw SchemaError(join(path, "type"),
                    "expected \"brownian\", \"constant\" or \"additive\", got " + show(j["type"]));
}

Scenario parse_document(const Json& root) {
  expect_object(root, "");
  allow_keys(root, "", {"species", "initial_dist", "emissions", "gas", "dilution", "env", "run", "optics", "grids"});

  Scenario sc;
  sc.db = parse_species(root);

  if (root.contains("initial_dist")) sc.initial_dist = parse_dist(root["initial_dist"], "initial_dist");

  if (root.contains("emissions")) {
    const auto& arr = expect_array(root["emissions"], "emissions");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = index("emissions", i);
      expect_object(arr[i], p);
      allow_keys(arr[i], p, {"start", "stop", "dist"});
      EmissionEntry e;
      e.start = number_or(arr[i], p, "start", 0.0);
      e.stop = number(arr[i], p, "stop");
      require(e.start < e.stop, join(p, "stop"), arr[i]["stop"], "emission window start < stop");
      e.dist = parse_dist(required(arr[i], p, "dist"), join(p, "dist"));
      sc.emissions.push_back(std::move(e));
    }
  }

  if (root.contains("gas")) {
    const auto& g = expect_object(root["gas"], "gas");
    allow_keys(g, "gas", {"initial", "emissions"});
    if (g.contains("initial")) sc.initial_gas = parse_gas_map(g["initial"], "gas.initial");
    if (g.contains("emissions")) {
      const auto& arr = expect_array(g["emissions"], "gas.emissions");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = index("gas.emissions", i);
        expect_object(arr[i], p);
        allow_keys(arr[i], p, {"species", "rate", "start", "stop"});
        GasEmission e;
        e.species = string_field(arr[i], p, "species");
        e.rate = number(arr[i], p, "rate");
        require(e.rate >= 0.0, join(p, "rate"), arr[i]["rate"], "rate >= 0");
        e.start = number_or(arr[i], p, "start", 0.0);
        e.stop = number(arr[i], p, "stop");
        require(e.start < e.stop, join(p, "stop"), arr[i]["stop"], "emission window start < stop");
        sc.gas_emissions.push_back(std::move(e));
      }
    }
  }

  if (root.contains("dilution")) {
    const auto& d = expect_object(root["dilution"], "dilution");
    allow_keys(d, "dilution", {"rate", "background_aero", "background_gas"});
    sc.dilution.rate = number(d, "dilution", "rate");
    require(sc.dilution.rate >= 0.0, "dilution.rate", d["rate"], "rate >= 0");
    if (d.contains("background_aero"))
      sc.dilution.background_aero = parse_dist(d["background_aero"], "dilution.background_aero");
    if (d.contains("background_gas"))
      sc.dilution.background_gas = parse_gas_map(d["background_gas"], "dilution.background_gas");
  }

  {
    const auto& e = expect_object(required(root, "", "env"), "env");
    allow_keys(e, "env", {"temperature", "pressure", "rel_humidity", "rh_profile"});
    sc.env.temperature = number(e, "env", "temperature");
    require(sc.env.temperature > 0.0, "env.temperature", e["temperature"], "temperature > 0");
    sc.env.pressure = number_or(e, "env", "pressure", 101325.0);
    require(sc.env.pressure > 0.0, "env.pressure", Json(sc.env.pressure), "pressure > 0");
    if (e.contains("rel_humidity") && e.contains("rh_profile"))
      throw SchemaError("env", "give either rel_humidity or rh_profile, not both");
    sc.env.relative_humidity = number_or(e, "env", "rel_humidity", 0.0);
    require(sc.env.relative_humidity >= 0.0, "env.rel_humidity", Json(sc.env.relative_humidity),
            "rel_humidity >= 0");
    if (e.contains("rh_profile")) {
      const auto& arr = expect_array(e["rh_profile"], "env.rh_profile");
      RhProfile profile;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = index("env.rh_profile", i);
        if (!arr[i].is_array() || arr[i].size() != 2)
          throw SchemaError(p, "expected [time, rh], got " + show(arr[i]));
        profile.points.emplace_back(as_number(arr[i][0], index(p, 0)), as_number(arr[i][1], index(p, 1)));
      }
      sc.rh_profile = std::move(profile);
      if (!sc.rh_profile->points.empty()) sc.env.relative_humidity = sc.rh_profile->at(0.0);
    }
  }

  {
    const auto& r = expect_object(required(root, "", "run"), "run");
    allow_keys(r, "run", {"duration", "dt", "n_target", "seed", "processes", "output_interval", "kernel", "sampling"});
    sc.duration = number(r, "run", "duration");
    require(sc.duration > 0.0, "run.duration", r["duration"], "duration > 0");
    sc.dt = number(r, "run", "dt");
    require(sc.dt > 0.0, "run.dt", r["dt"], "dt > 0");
    sc.n_target = static_cast<std::size_t>(unsigned_or(r, "run", "n_target", 1000));
    require(sc.n_target >= 10, "run.n_target", Json(sc.n_target), "n_target >= 10");
    sc.seed = unsigned_or(r, "run", "seed", 0);
    sc.diagnostics.output_interval = number_or(r, "run", "output_interval", 3600.0);
    require(sc.diagnostics.output_interval > 0.0, "run.output_interval",
            Json(sc.diagnostics.output_interval), "output_interval > 0");
    if (r.contains("processes")) {
      const auto& p = expect_object(r["processes"], "run.processes");
      allow_keys(p, "run.processes", {"coagulation", "emissions", "dilution"});
      sc.processes.coagulation = bool_or(p, "run.processes", "coagulation", true);
      sc.processes.emissions = bool_or(p, "run.processes", "emissions", true);
      sc.processes.dilution = bool_or(p, "run.processes", "dilution", true);
    }
    if (r.contains("kernel")) sc.kernel = parse_kernel(r["kernel"], "run.kernel");
    if (r.contains("sampling")) {
      const std::string s = string_field(r, "run", "sampling");
      if (s == "poisson") {
        sc.sampling = CountSampling::poisson;
      } else if (s == "rounded") {
        sc.sampling = CountSampling::rounded;
      } else {
        throw SchemaError("run.sampling", "expected \"poisson\" or \"rounded\", got " + show(r["sampling"]));
      }
    }
  }

  if (root.contains("grids")) {
    const auto& g = expect_object(root["grids"], "grids");
    allow_keys(g, "grids", {"diameter", "fraction", "coagulation"});
    if (g.contains("diameter")) {
      const auto spec = parse_grid(g["diameter"], "grids.diameter", {1e-9, 1e-5, 100});
      sc.diagnostics.hist_grid = HistogramGrid::log_diameter(spec.min, spec.max, spec.n_bins);
    }
    if (g.contains("coagulation")) {
      const auto spec = parse_grid(g["coagulation"], "grids.coagulation", {1e-10, 1e-3, 140});
      sc.coag_grid = BinGrid::log_spaced(spec.min, spec.max, spec.n_bins);
    }
    if (g.contains("fraction")) {
      const auto& f = expect_object(g["fraction"], "grids.fraction");
      allow_keys(f, "grids.fraction", {"n_bins", "species"});
      const auto n = unsigned_or(f, "grids.fraction", "n_bins", 10);
      require(n >= 1, "grids.fraction.n_bins", Json(n), "n_bins >= 1");
      sc.diagnostics.hist_grid = sc.diagnostics.hist_grid.with_fractions(n);
      const auto& species = expect_array(required(f, "grids.fraction", "species"), "grids.fraction.species");
      for (std::size_t i = 0; i < species.size(); ++i) {
        if (!species[i].is_string())
          throw SchemaError(index("grids.fraction.species", i), "expected a string, got " + show(species[i]));
        sc.diagnostics.fraction_species.push_back(species[i].get<std::string>());
      }
    }
  }
  if (root.contains("optics")) {
    const auto& o = expect_object(root["optics"], "optics");
    allow_keys(o, "optics", {"wavelength", "refractive_index", "water_refractive_index"});
    OpticsSpec optics;
    optics.wavelength = number(o, "optics", "wavelength");
    require(optics.wavelength > 0.0, "optics.wavelength", o["wavelength"], "wavelength > 0");
    const auto& idx = expect_object(required(o, "optics", "refractive_index"), "optics.refractive_index");
    for (const auto& [name, v] : idx.items())
      optics.refractive_index[name] = parse_complex(v, join("optics.refractive_index", name));
    if (o.contains("water_refractive_index"))
      optics.water_refractive_index = parse_complex(o["water_refractive_index"], "optics.water_refractive_index");
    sc.diagnostics.optics = std::move(optics);
  }

  sc.validate();
  return sc;
}

Json dist_to_json(const AeroDist& dist) {
  Json modes = Json::array();
  for (const auto& m : dist.modes) {
    Json jm;
    jm["name"] = m.name();
    jm["mode_type"] = m.type() == ModeType::mono ? "mono" : "log_normal";
    jm["num_conc"] = m.num_conc();
    jm["geom_mean_diam"] = m.geom_mean_diam();
    if (m.type() == ModeType::log_normal) jm["geom_std_dev"] = m.geom_std_dev();
    Json fr = Json::object();
    for (const auto& [s, f] : m.mass_fracs()) fr[s] = f;
    jm["mass_fracs"] = std::move(fr);
    modes.push_back(std::move(jm));
  }
  return Json{{"modes", std::move(modes)}};
}

Json gas_to_json(const GasState& gas) {
  Json j = Json::object();
  for (const auto& [n, v] : gas.mixing_ratios) j[n] = v;
  return j;
}

Json grid_to_json(const std::vector<double>& edges) {
  return Json{{"min", edges.front()}, {"max", edges.back()}, {"n_bins", edges.size() - 1}};
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  Json root;
  try {
    root = Json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_document(root);
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& sc, int indent) {
  Json root;
  Json species = Json::array();
  for (const auto& s : sc.db.records()) {
    Json js{{"name", s.name}, {"density", s.density}, {"kappa", s.kappa}};
    if (s.is_water) js["is_water"] = true;
    species.push_back(std::move(js));
  }
  root["species"] = std::move(species);
  root["initial_dist"] = dist_to_json(sc.initial_dist);

  Json emissions = Json::array();
  for (const auto& e : sc.emissions)
    emissions.push_back(Json{{"start", e.start}, {"stop", e.stop}, {"dist", dist_to_json(e.dist)}});
  root["emissions"] = std::move(emissions);

  Json gas_emissions = Json::array();
  for (const auto& g : sc.gas_emissions)
    gas_emissions.push_back(Json{{"species", g.species}, {"rate", g.rate}, {"start", g.start}, {"stop", g.stop}});
  root["gas"] = Json{{"initial", gas_to_json(sc.initial_gas)}, {"emissions", std::move(gas_emissions)}};

  root["dilution"] = Json{{"rate", sc.dilution.rate},
                          {"background_aero", dist_to_json(sc.dilution.background_aero)},
                          {"background_gas", gas_to_json(sc.dilution.background_gas)}};

  Json env{{"temperature", sc.env.temperature}, {"pressure", sc.env.pressure}};
  if (sc.rh_profile) {
    Json pts = Json::array();
    for (const auto& [t, rh] : sc.rh_profile->points) pts.push_back(Json::array({t, rh}));
    env["rh_profile"] = std::move(pts);
  } else {
    env["rel_humidity"] = sc.env.relative_humidity;
  }
  root["env"] = std::move(env);

  Json kernel;
  if (const auto* k = std::get_if<ConstantKernel>(&sc.kernel)) {
    kernel = Json{{"type", "constant"}, {"value", k->value}};
  } else if (const auto* a = std::get_if<AdditiveKernel>(&sc.kernel)) {
    kernel = Json{{"type", "additive"}, {"value", a->coefficient}};
  } else {
    kernel = Json{{"type", "brownian"}};
  }
  root["run"] = Json{{"duration", sc.duration},
                     {"dt", sc.dt},
                     {"n_target", sc.n_target},
                     {"seed", sc.seed},
                     {"processes", Json{{"coagulation", sc.processes.coagulation},
                                        {"emissions", sc.processes.emissions},
                                        {"dilution", sc.processes.dilution}}},
                     {"output_interval", sc.diagnostics.output_interval},
                     {"kernel", std::move(kernel)},
                     {"sampling", sc.sampling == CountSampling::poisson ? "poisson" : "rounded"}};

  Json grids{{"diameter", grid_to_json(sc.diagnostics.hist_grid.diameter_edges)},
             {"coagulation", grid_to_json(sc.coag_grid.edges())}};
  if (sc.diagnostics.hist_grid.fraction_edges) {
    grids["fraction"] = Json{{"n_bins", sc.diagnostics.hist_grid.fraction_edges->size() - 1},
                             {"species", sc.diagnostics.fraction_species}};
  }
  root["grids"] = std::move(grids);

  if (sc.diagnostics.optics) {
    const auto& o = *sc.diagnostics.optics;
    Json idx = Json::object();
    for (const auto& [name, m] : o.refractive_index) idx[name] = Json::array({m.real(), m.imag()});
    Json jo{{"wavelength", o.wavelength}, {"refractive_index", std::move(idx)}};
    if (o.water_refractive_index)
      jo["water_refractive_index"] = Json::array({o.water_refractive_index->real(), o.water_refractive_index->imag()});
    root["optics"] = std::move(jo);
  }
  return root.dump(indent);
}

}  // namespace aeromc
