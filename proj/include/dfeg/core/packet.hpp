#pragma once

#include "dfeg/core/spinor.hpp"

namespace dfeg {

/// Gaussian seed exp(-(z-z0)^2/(4 w^2) + i p0 z/hbar) in component 0 (upper,
/// spin up), normalized on the grid. w is the standard deviation of |psi|^2.
///
/// Throws ConfigError if w < dz or if more than 1e-8 of the continuum
/// probability lies outside [z_min, z_max).
SpinorField make_gaussian_packet(const Grid& grid, double z0, double p0, double width,
                                 double hbar = 1.0, int component = 0);

/// Continuum probability of a Gaussian of standard deviation w outside the grid.
double gaussian_leakage(const Grid& grid, double z0, double width);

}  // namespace dfeg
