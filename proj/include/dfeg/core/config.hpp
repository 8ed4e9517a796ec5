#pragma once

#include <optional>
#include <string>

namespace dfeg {

enum class UnitSystem { natural, si };
enum class PotentialMode { conservative, none };
enum class MirrorModel { mass_step, delta_term };

std::string to_string(UnitSystem u);
std::string to_string(PotentialMode m);
std::string to_string(MirrorModel m);

/// Mirror at z_mirror + a_m sin(omega_m t).
///
/// mass_step raises the mass to m + V0/c^2 for z <= mirror position; a
/// positive reg_width smooths the step over that length.
/// delta_term adds -(hbar c/2) beta delta(z - mirror position), smeared into a
/// normalized Gaussian of standard deviation reg_width (0 selects 2 dz).
struct MirrorConfig {
  MirrorModel model = MirrorModel::mass_step;
  double v0 = 0.0;
  double z_mirror = 0.0;
  double amplitude = 0.0;
  double omega = 0.0;
  double reg_width = 0.0;
  double delta_weight_scale = 1.0;  // multiplies the hbar c / 2 weight

  double position(double t) const;
};

/// Physical constants and the generator selection for the Dirac dynamics.
struct HamiltonianConfig {
  double hbar = 1.0;
  double mass = 1.0;
  double c = 1.0;
  double g = 0.5;
  PotentialMode potential = PotentialMode::conservative;
  bool include_redshift = false;
  std::optional<MirrorConfig> mirror;
  UnitSystem units = UnitSystem::natural;

  /// Throws ConfigError when a constant is not strictly positive (g may be 0).
  void validate() const;

  double rest_energy() const { return mass * c * c; }
  /// hbar / (2 m c^2).
  double zitterbewegung_time() const;
  /// Gravitational coupling m g entering beta m g z (0 when the potential is off).
  double potential_slope() const;
};

/// Neutron constants in SI units.
HamiltonianConfig neutron_si_config();

}  // namespace dfeg
