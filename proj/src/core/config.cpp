#include "dfeg/core/config.hpp"

#include <cmath>

#include "dfeg/core/types.hpp"

namespace dfeg {

std::string to_string(UnitSystem u) { return u == UnitSystem::natural ? "natural" : "si"; }

std::string to_string(PotentialMode m) {
  return m == PotentialMode::conservative ? "conservative" : "none";
}

std::string to_string(MirrorModel m) {
  return m == MirrorModel::mass_step ? "mass_step" : "delta_term";
}

double MirrorConfig::position(double t) const {
  if (amplitude == 0.0 || omega == 0.0) return z_mirror;
  return z_mirror + amplitude * std::sin(omega * t);
}

void HamiltonianConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("hamiltonian.") + name + " must be > 0");
    }
  };
  positive(hbar, "hbar");
  positive(mass, "mass");
  positive(c, "c");
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw ConfigError("hamiltonian.g must be >= 0");
  }
  if (mirror) {
    if (mirror->v0 < 0.0) throw ConfigError("mirror.v0 must be >= 0");
    if (mirror->reg_width < 0.0) throw ConfigError("mirror.reg_width must be >= 0");
  }
}

double HamiltonianConfig::zitterbewegung_time() const {
  return hbar / (2.0 * mass * c * c);
}

double HamiltonianConfig::potential_slope() const {
  return potential == PotentialMode::conservative ? mass * g : 0.0;
}

HamiltonianConfig neutron_si_config() {
  HamiltonianConfig cfg;
  cfg.hbar = 1.054571817e-34;
  cfg.mass = 1.67492749804e-27;
  cfg.c = 299792458.0;
  cfg.g = 9.81;
  cfg.units = UnitSystem::si;
  return cfg;
}

}  // namespace dfeg
