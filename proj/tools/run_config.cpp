#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "dfeg/core/types.hpp"
#include "dfeg/qbounce/bounce.hpp"

namespace dfeg::cli {

std::string to_string(Command c) {
  switch (c) {
    case Command::free_fall: return "free-fall";
    case Command::dfeg: return "dfeg";
    case Command::qbounce: return "qbounce";
    case Command::spectrum: return "spectrum";
    case Command::nonrel_compare: return "nonrel-compare";
    case Command::verify: return "verify";
  }
  return "unknown";
}

std::string suggest_key(const std::string& key, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = 3;
  for (const auto& c : candidates) {
    std::vector<std::size_t> row(c.size() + 1);
    for (std::size_t j = 0; j <= c.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= key.size(); ++i) {
      std::size_t diag = row[0];
      row[0] = i;
      for (std::size_t j = 1; j <= c.size(); ++j) {
        const std::size_t up = row[j];
        row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (key[i - 1] == c[j - 1] ? 0 : 1)});
        diag = up;
      }
    }
    if (row[c.size()] < best_d) {
      best_d = row[c.size()];
      best = c;
    }
  }
  return best;
}

namespace {

void check_keys(const Json& obj, const std::string& path, const std::vector<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
    std::string msg = "unknown key '" + (path.empty() ? key : path + "." + key) + "'";
    const std::string s = suggest_key(key, allowed);
    if (!s.empty()) msg += " (did you mean '" + s + "'?)";
    throw ConfigError(msg);
  }
}

std::string field(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void read(const Json& obj, const std::string& path, const std::string& key, double& out) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(field(path, key) + ": expected a number");
  out = v.get<double>();
  if (!std::isfinite(out)) throw ConfigError(field(path, key) + ": must be finite");
}

void read(const Json& obj, const std::string& path, const std::string& key, std::size_t& out) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(field(path, key) + ": expected a non-negative integer");
  }
  out = v.get<std::size_t>();
}

void read(const Json& obj, const std::string& path, const std::string& key, int& out) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(field(path, key) + ": expected an integer");
  out = v.get<int>();
}

void read(const Json& obj, const std::string& path, const std::string& key, bool& out) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(field(path, key) + ": expected true or false");
  out = v.get<bool>();
}

void read(const Json& obj, const std::string& path, const std::string& key, std::string& out,
          const std::vector<std::string>& choices) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(field(path, key) + ": expected a string");
  out = v.get<std::string>();
  if (std::find(choices.begin(), choices.end(), out) == choices.end()) {
    std::string msg = field(path, key) + ": '" + out + "' is not one of";
    for (const auto& c : choices) msg += " " + c;
    throw ConfigError(msg);
  }
}

void read(const Json& obj, const std::string& path, const std::string& key,
          std::vector<double>& out) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(field(path, key) + ": expected an array of numbers");
  out.clear();
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(field(path, key) + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
}

void positive(double v, const std::string& name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(name + " must be > 0");
}

}  // namespace

RunConfig default_config(Command command) {
  RunConfig cfg;
  cfg.command = command;
  cfg.ham.g = 0.5;
  switch (command) {
    case Command::dfeg:
      cfg.grid = {128, -8.0, 12.0};
      cfg.packet.z0 = 2.0;
      cfg.packet.width = 0.6;
      cfg.time = {0.1, 6.0, 1};
      cfg.dfeg.integrator = "strang";
      break;
    case Command::qbounce:
      apply_preset(cfg, "qbounce-bouncer");
      cfg.preset.clear();
      break;
    default:
      break;
  }
  return cfg;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "paper-fig1", "paper-fig2", "paper-fig3", "qbounce-bouncer", "qbounce-reflection",
      "qbounce-entropic"};
  return names;
}

void apply_preset(RunConfig& cfg, const std::string& name) {
  if (name.rfind("paper-fig", 0) == 0 &&
      std::find(preset_names().begin(), preset_names().end(), name) != preset_names().end()) {
    if (cfg.command != Command::free_fall) {
      throw ConfigError("preset " + name + " applies to free-fall only");
    }
    // The figures share one run; width, grid and dt are free choices.
    cfg.ham = HamiltonianConfig{};
    cfg.ham.g = 0.5;
    cfg.grid = {8192, -10.0, 30.0};
    cfg.packet = PacketSpec{};
    cfg.time = {0.01, 10.0, 1};
  } else if (name == "qbounce-bouncer" || name == "qbounce-reflection" ||
             name == "qbounce-entropic") {
    if (cfg.command != Command::qbounce) {
      throw ConfigError("preset " + name + " applies to qbounce only");
    }
    cfg.ham = HamiltonianConfig{};
    cfg.packet = PacketSpec{};
    cfg.mirror = MirrorSpec{};
    if (name == "qbounce-bouncer") {
      cfg.qbounce.kind = "bounce";
      cfg.ham.c = 10.0;
      cfg.ham.g = 1.0;
      cfg.grid = {1024, -5.0, 15.0};
      cfg.packet.z0 = 3.0;
      cfg.packet.width = 0.5;
      cfg.time = {5e-4, 40.0, 20};
    } else if (name == "qbounce-reflection") {
      const ReflectionScenario sc;
      cfg.qbounce.kind = "reflection";
      cfg.ham.c = 1.0;
      cfg.ham.g = 0.0;
      cfg.grid = {sc.n_points, sc.z_min, sc.z_max};
      cfg.packet.z0 = sc.z0;
      cfg.packet.p0 = sc.p0;
      cfg.packet.width = sc.width;
      cfg.time = {sc.dt, sc.t_end, sc.record_every};
      cfg.mirror->v0 = 50.0;
    } else {
      cfg.qbounce.kind = "entropic";
      cfg.ham.c = 1.0;
      cfg.ham.g = 1.0;
      cfg.grid = {128, -8.0, 12.0};
      cfg.packet.z0 = 3.0;
      cfg.packet.width = 0.6;
      cfg.time = {0.1, 6.0, 1};
      cfg.mirror->reg_width = 0.32;
      cfg.dfeg.sigma = 200.0;
      cfg.dfeg.integrator = "strang";
    }
  } else {
    std::string msg = "unknown preset '" + name + "'";
    const std::string s = suggest_key(name, preset_names());
    if (!s.empty()) msg += " (did you mean '" + s + "'?)";
    throw ConfigError(msg);
  }
  cfg.preset = name;
}

void apply_json(RunConfig& cfg, const Json& doc) {
  check_keys(doc, "", {"command", "preset", "units", "hbar", "mass", "c", "g", "potential",
                       "include_redshift", "seed", "grid", "packet", "time", "dfeg", "mirror",
                       "qbounce", "spectrum", "nonrel"});
  // A manifest's config snapshot is itself a valid config file.
  std::string command = to_string(cfg.command);
  std::vector<std::string> commands;
  for (Command c : {Command::free_fall, Command::dfeg, Command::qbounce, Command::spectrum,
                    Command::nonrel_compare, Command::verify}) {
    commands.push_back(to_string(c));
  }
  read(doc, "", "command", command, commands);
  if (command != to_string(cfg.command)) {
    throw ConfigError("command: config is for '" + command + "', running '" +
                      to_string(cfg.command) + "'");
  }
  // A preset is applied first so the remaining keys override it.
  std::string preset;
  std::vector<std::string> presets = preset_names();
  presets.emplace_back();
  read(doc, "", "preset", preset, presets);
  if (!preset.empty()) apply_preset(cfg, preset);
  std::string units = to_string(cfg.units);
  std::string potential = to_string(cfg.ham.potential);
  read(doc, "", "units", units, {"natural", "si"});
  cfg.units = units == "si" ? UnitSystem::si : UnitSystem::natural;
  read(doc, "", "hbar", cfg.ham.hbar);
  read(doc, "", "mass", cfg.ham.mass);
  read(doc, "", "c", cfg.ham.c);
  read(doc, "", "g", cfg.ham.g);
  read(doc, "", "potential", potential, {"conservative", "none"});
  cfg.ham.potential = potential == "none" ? PotentialMode::none : PotentialMode::conservative;
  read(doc, "", "include_redshift", cfg.ham.include_redshift);
  if (doc.contains("seed")) {
    const Json& v = doc.at("seed");
    if (!v.is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    cfg.seed = v.get<std::uint64_t>();
  }

  if (doc.contains("grid")) {
    const Json& o = doc.at("grid");
    check_keys(o, "grid", {"n_points", "z_min", "z_max"});
    read(o, "grid", "n_points", cfg.grid.n_points);
    read(o, "grid", "z_min", cfg.grid.z_min);
    read(o, "grid", "z_max", cfg.grid.z_max);
  }
  if (doc.contains("packet")) {
    const Json& o = doc.at("packet");
    check_keys(o, "packet", {"z0", "z0_mixed", "p0", "width", "antimatter"});
    read(o, "packet", "z0", cfg.packet.z0);
    read(o, "packet", "z0_mixed", cfg.packet.z0_mixed);
    read(o, "packet", "p0", cfg.packet.p0);
    read(o, "packet", "width", cfg.packet.width);
    read(o, "packet", "antimatter", cfg.packet.antimatter, {"conjugate", "negative"});
  }
  if (doc.contains("time")) {
    const Json& o = doc.at("time");
    check_keys(o, "time", {"dt", "t_end", "record_every"});
    read(o, "time", "dt", cfg.time.dt);
    read(o, "time", "t_end", cfg.time.t_end);
    read(o, "time", "record_every", cfg.time.record_every);
  }
  if (doc.contains("dfeg")) {
    const Json& o = doc.at("dfeg");
    check_keys(o, "dfeg", {"sigma", "x0", "mode", "method", "integrator", "n_traj"});
    read(o, "dfeg", "sigma", cfg.dfeg.sigma);
    read(o, "dfeg", "x0", cfg.dfeg.x0);
    read(o, "dfeg", "mode", cfg.dfeg.mode, {"full", "expanded", "conservative"});
    read(o, "dfeg", "method", cfg.dfeg.method, {"dense", "unravel"});
    read(o, "dfeg", "integrator", cfg.dfeg.integrator, {"rk4", "strang"});
    read(o, "dfeg", "n_traj", cfg.dfeg.n_traj);
  }
  if (doc.contains("mirror")) {
    const Json& o = doc.at("mirror");
    if (o.is_null()) {
      cfg.mirror.reset();
    } else {
      check_keys(o, "mirror", {"model", "v0", "z_mirror", "amplitude", "omega", "reg_width"});
      MirrorSpec m = cfg.mirror.value_or(MirrorSpec{});
      read(o, "mirror", "model", m.model, {"mass_step", "delta_term"});
      read(o, "mirror", "v0", m.v0);
      read(o, "mirror", "z_mirror", m.z_mirror);
      read(o, "mirror", "amplitude", m.amplitude);
      read(o, "mirror", "omega", m.omega);
      read(o, "mirror", "reg_width", m.reg_width);
      cfg.mirror = m;
    }
  }
  if (doc.contains("qbounce")) {
    const Json& o = doc.at("qbounce");
    check_keys(o, "qbounce", {"kind", "v0_list", "n_levels"});
    read(o, "qbounce", "kind", cfg.qbounce.kind, {"bounce", "reflection", "entropic"});
    read(o, "qbounce", "v0_list", cfg.qbounce.v0_list);
    read(o, "qbounce", "n_levels", cfg.qbounce.n_levels);
  }
  if (doc.contains("spectrum")) {
    const Json& o = doc.at("spectrum");
    check_keys(o, "spectrum", {"mu0", "n", "s"});
    read(o, "spectrum", "mu0", cfg.spectrum.mu0);
    read(o, "spectrum", "n", cfg.spectrum.n);
    read(o, "spectrum", "s", cfg.spectrum.s);
  }
  if (doc.contains("nonrel")) {
    const Json& o = doc.at("nonrel");
    check_keys(o, "nonrel",
               {"scenario", "c_list", "g", "z0", "width", "t_end", "record_dt", "n_points",
                "z_min", "z_max", "dt_fraction", "sigma", "mirror_v0", "mirror_z",
                "mirror_reg_width"});
    auto& n = cfg.nonrel;
    read(o, "nonrel", "scenario", n.scenario, {"free_fall", "dfeg", "qbounce_static"});
    read(o, "nonrel", "c_list", n.c_list);
    read(o, "nonrel", "g", n.options.g);
    read(o, "nonrel", "z0", n.options.z0);
    read(o, "nonrel", "width", n.options.width);
    read(o, "nonrel", "t_end", n.options.t_end);
    read(o, "nonrel", "record_dt", n.options.record_dt);
    read(o, "nonrel", "n_points", n.options.n_points);
    read(o, "nonrel", "z_min", n.options.z_min);
    read(o, "nonrel", "z_max", n.options.z_max);
    read(o, "nonrel", "dt_fraction", n.options.dt_fraction);
    read(o, "nonrel", "sigma", n.options.sigma);
    read(o, "nonrel", "mirror_v0", n.options.mirror_v0);
    read(o, "nonrel", "mirror_z", n.options.mirror_z);
    read(o, "nonrel", "mirror_reg_width", n.options.mirror_reg_width);
  }
}

void RunConfig::validate() const {
  if (command == Command::verify) return;
  ham.validate();
  if (command == Command::spectrum) {
    positive(spectrum.mu0, "spectrum.mu0");
    if (spectrum.n == 0 || spectrum.n > 50) throw ConfigError("spectrum.n must be in 1..50");
    if (spectrum.s != 1 && spectrum.s != -1) throw ConfigError("spectrum.s must be +1 or -1");
    return;
  }
  if (units == UnitSystem::si) {
    throw ConfigError("--units si is supported by the spectrum command only");
  }
  if (command == Command::nonrel_compare) {
    if (nonrel.c_list.size() < 2) throw ConfigError("nonrel.c_list needs at least two speeds");
    for (double c : nonrel.c_list) positive(c, "nonrel.c_list entries");
    positive(nonrel.options.width, "nonrel.width");
    positive(nonrel.options.t_end, "nonrel.t_end");
    positive(nonrel.options.record_dt, "nonrel.record_dt");
    positive(nonrel.options.dt_fraction, "nonrel.dt_fraction");
    positive(nonrel.options.sigma, "nonrel.sigma");
    if (!(nonrel.options.z_max > nonrel.options.z_min)) {
      throw ConfigError("nonrel.z_max must exceed nonrel.z_min");
    }
    return;
  }
  if (grid.n_points < 8) throw ConfigError("grid.n_points must be >= 8");
  if (!(grid.z_max > grid.z_min)) throw ConfigError("grid.z_max must exceed grid.z_min");
  positive(packet.width, "packet.width");
  positive(time.dt, "time.dt");
  positive(time.t_end, "time.t_end");
  if (time.record_every == 0) throw ConfigError("time.record_every must be >= 1");
  if (time.t_end < time.dt) throw ConfigError("time.t_end must be >= time.dt");
  positive(dfeg.sigma, "dfeg.sigma");
  if (dfeg.x0 < 0.0) throw ConfigError("dfeg.x0 must be >= 0");
  if (dfeg.method == "unravel" && dfeg.n_traj < 2) throw ConfigError("dfeg.n_traj must be >= 2");
  if (command == Command::qbounce) {
    if (!mirror) throw ConfigError("qbounce needs a mirror section");
    if (mirror->v0 < 0.0) throw ConfigError("mirror.v0 must be >= 0");
    if (mirror->reg_width < 0.0) throw ConfigError("mirror.reg_width must be >= 0");
    for (double v : qbounce.v0_list) {
      if (v < 0.0) throw ConfigError("qbounce.v0_list entries must be >= 0");
    }
  }
}

Json RunConfig::to_json() const {
  Json j;
  j["command"] = to_string(command);
  j["preset"] = preset;
  j["units"] = to_string(units);
  j["hbar"] = ham.hbar;
  j["mass"] = ham.mass;
  j["c"] = ham.c;
  j["g"] = ham.g;
  j["potential"] = to_string(ham.potential);
  j["include_redshift"] = ham.include_redshift;
  j["seed"] = seed;
  j["grid"] = {{"n_points", grid.n_points}, {"z_min", grid.z_min}, {"z_max", grid.z_max}};
  j["packet"] = {{"z0", packet.z0},
                 {"z0_mixed", packet.z0_mixed},
                 {"p0", packet.p0},
                 {"width", packet.width},
                 {"antimatter", packet.antimatter}};
  j["time"] = {{"dt", time.dt}, {"t_end", time.t_end}, {"record_every", time.record_every}};
  j["dfeg"] = {{"sigma", dfeg.sigma},         {"x0", dfeg.x0},
               {"mode", dfeg.mode},           {"method", dfeg.method},
               {"integrator", dfeg.integrator}, {"n_traj", dfeg.n_traj}};
  if (mirror) {
    j["mirror"] = {{"model", mirror->model},         {"v0", mirror->v0},
                   {"z_mirror", mirror->z_mirror},   {"amplitude", mirror->amplitude},
                   {"omega", mirror->omega},         {"reg_width", mirror->reg_width}};
  } else {
    j["mirror"] = nullptr;
  }
  j["qbounce"] = {{"kind", qbounce.kind},
                  {"v0_list", qbounce.v0_list},
                  {"n_levels", qbounce.n_levels}};
  j["spectrum"] = {{"mu0", spectrum.mu0}, {"n", spectrum.n}, {"s", spectrum.s}};
  const auto& o = nonrel.options;
  j["nonrel"] = {{"scenario", nonrel.scenario},
                 {"c_list", nonrel.c_list},
                 {"g", o.g},
                 {"z0", o.z0},
                 {"width", o.width},
                 {"t_end", o.t_end},
                 {"record_dt", o.record_dt},
                 {"n_points", o.n_points},
                 {"z_min", o.z_min},
                 {"z_max", o.z_max},
                 {"dt_fraction", o.dt_fraction},
                 {"sigma", o.sigma},
                 {"mirror_v0", o.mirror_v0},
                 {"mirror_z", o.mirror_z},
                 {"mirror_reg_width", o.mirror_reg_width}};
  return j;
}

RunConfig load_config(const std::string& path, Command command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  RunConfig cfg = default_config(command);
  apply_json(cfg, doc);
  cfg.validate();
  return cfg;
}

}  // namespace dfeg::cli
