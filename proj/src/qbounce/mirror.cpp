#include "dfeg/qbounce/mirror.hpp"

#include <cmath>
#include <iostream>

#include "dfeg/kernels/kernels.hpp"

namespace dfeg {

double effective_reg_width(const Grid& grid, const MirrorConfig& mirror) {
  return mirror.reg_width > 0.0 ? mirror.reg_width : 2.0 * grid.dz();
}

std::vector<double> mirror_profile(const Grid& grid, const MirrorConfig& mirror,
                                   const HamiltonianConfig& cfg, double t) {
  std::vector<double> v(grid.size(), 0.0);
  const double zm = mirror.position(t);
  if (mirror.model == MirrorModel::mass_step) {
    if (mirror.v0 == 0.0) return v;
    if (mirror.reg_width > 0.0) {
      const double s = std::sqrt(2.0) * mirror.reg_width;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        v[i] = 0.5 * mirror.v0 * std::erfc((grid.z(i) - zm) / s);
      }
      return v;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.z(i) <= zm) v[i] = mirror.v0;
    }
    return v;
  }
  const double w = effective_reg_width(grid, mirror);
  const double weight = 0.5 * cfg.hbar * cfg.c * mirror.delta_weight_scale;
  if (weight == 0.0) return v;
  const double norm = 1.0 / (std::sqrt(2.0 * kPi) * w);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = (grid.z(i) - zm) / w;
    v[i] = -weight * norm * std::exp(-0.5 * x * x);
  }
  return v;
}

void validate_mirror(const Grid& grid, const MirrorConfig& mirror, const HamiltonianConfig& cfg) {
  const double lo = mirror.z_mirror - std::abs(mirror.amplitude);
  const double hi = mirror.z_mirror + std::abs(mirror.amplitude);
  if (lo <= grid.z_min() || hi >= grid.z_max()) {
    throw ConfigError("mirror: position must stay inside the grid");
  }
  if (mirror.reg_width > 0.0 && mirror.reg_width < 2.0 * grid.dz() * (1.0 - 1e-12)) {
    throw ConfigError("mirror: reg_width must be >= 2 dz");
  }
  if (mirror.model == MirrorModel::mass_step && mirror.v0 > 0.0 &&
      mirror.v0 < 10.0 * cfg.rest_energy()) {
    std::cerr << "warning: mirror.v0 below 10 m c^2; the step is only weakly reflecting\n";
  }
}

SpinorField mirror_potential_step(const SpinorField& psi, double dt, const MirrorConfig& mirror,
                                  const HamiltonianConfig& cfg, double t) {
  const auto v = mirror_profile(psi.grid(), mirror, cfg, t);
  std::vector<cplx> phase(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) phase[i] = std::polar(1.0, -v[i] * dt / cfg.hbar);
  SpinorField out = psi;
  kernels::serial::potential_phase(out.values(), phase);
  return out;
}

}  // namespace dfeg
