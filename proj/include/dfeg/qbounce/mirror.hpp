#pragma once

#include <vector>

#include "dfeg/core/config.hpp"
#include "dfeg/core/spinor.hpp"

namespace dfeg {

/// reg_width if set, else 2 dz.
double effective_reg_width(const Grid& grid, const MirrorConfig& mirror);

/// Coefficient of beta contributed by the mirror at time t:
/// mass_step gives V0 for z <= position(t), or V0 erfc((z - position(t))/(sqrt2 w))/2
/// when reg_width w > 0; delta_term gives
/// -(hbar c/2) * scale * G(z - position(t)) with G a unit-mass Gaussian.
std::vector<double> mirror_profile(const Grid& grid, const MirrorConfig& mirror,
                                   const HamiltonianConfig& cfg, double t);

/// Throws ConfigError for a mirror outside the grid or reg_width < 2 dz.
void validate_mirror(const Grid& grid, const MirrorConfig& mirror, const HamiltonianConfig& cfg);

/// Multiplies by the beta-diagonal phase exp(-i beta V_mirror(z, t) dt/hbar).
SpinorField mirror_potential_step(const SpinorField& psi, double dt, const MirrorConfig& mirror,
                                  const HamiltonianConfig& cfg, double t = 0.0);

}  // namespace dfeg
