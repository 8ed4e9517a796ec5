#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfeg/core/config.hpp"
#include "dfeg/lindblad/dfeg.hpp"
#include "dfeg/nonrel/nonrel.hpp"
#include "json.hpp"

namespace dfeg::cli {

using Json = nlohmann::ordered_json;

enum class Command { free_fall, dfeg, qbounce, spectrum, nonrel_compare, verify };

std::string to_string(Command c);

struct GridSpec {
  std::size_t n_points = 8192;
  double z_min = -10.0;
  double z_max = 30.0;
};

struct PacketSpec {
  double z0 = 2.0;
  double z0_mixed = 2.38;  // the unprojected packet of the free-fall family
  double p0 = 0.0;
  double width = 0.01;
  std::string antimatter = "conjugate";  // conjugate | negative
};

struct TimeSpec {
  double dt = 0.01;
  double t_end = 10.0;
  std::size_t record_every = 1;
};

struct DfegSpec {
  double sigma = 100.0;
  double x0 = 0.0;  // 0: derived from hbar, m, g
  std::string mode = "full";         // full | expanded | conservative
  std::string method = "dense";      // dense | unravel
  std::string integrator = "rk4";    // rk4 | strang
  std::size_t n_traj = 200;
};

struct MirrorSpec {
  std::string model = "mass_step";
  double v0 = 10.0;  // in units of m c^2
  double z_mirror = 0.0;
  double amplitude = 0.0;
  double omega = 0.0;
  double reg_width = 0.0;
};

struct QbounceSpec {
  std::string kind = "bounce";  // bounce | reflection | entropic
  std::vector<double> v0_list = {0.0, 10.0, 50.0};
  std::size_t n_levels = 6;  // levels compared with the autocorrelation peaks
};

struct SpectrumSpec {
  double mu0 = 100.0;
  std::size_t n = 5;
  int s = 1;
};

struct NonrelSpec {
  std::string scenario = "free_fall";
  std::vector<double> c_list = {2.0, 5.0, 10.0, 20.0};
  LimitOptions options;
};

/// Validated configuration of one CLI run. Defaults depend on the command:
/// free-fall and spectrum start from the natural-unit preset (hbar = c = m = 1,
/// g = 0.5); dfeg and qbounce pick grids their solvers can afford.
struct RunConfig {
  Command command = Command::free_fall;
  UnitSystem units = UnitSystem::natural;
  HamiltonianConfig ham;
  GridSpec grid;
  PacketSpec packet;
  TimeSpec time;
  DfegSpec dfeg;
  std::optional<MirrorSpec> mirror;
  QbounceSpec qbounce;
  SpectrumSpec spectrum;
  NonrelSpec nonrel;
  std::uint64_t seed = 0;
  std::string preset;  // empty when none

  void validate() const;
  Json to_json() const;
};

RunConfig default_config(Command command);

/// Names accepted by --preset.
const std::vector<std::string>& preset_names();

/// Applies a preset on top of the command defaults. Throws ConfigError for an
/// unknown name.
void apply_preset(RunConfig& cfg, const std::string& name);

/// Overlays a JSON document on cfg. Unknown keys are rejected with the path
/// and, when one is close, a suggestion.
void apply_json(RunConfig& cfg, const Json& doc);

/// Reads and validates a config file for command.
RunConfig load_config(const std::string& path, Command command);

/// Closest candidate by edit distance, or empty when nothing is within 2 edits.
std::string suggest_key(const std::string& key, const std::vector<std::string>& candidates);

}  // namespace dfeg::cli
