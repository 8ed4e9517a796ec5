#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfeg/core/config.hpp"
#include "dfeg/core/grid.hpp"
#include "dfeg/core/timeseries.hpp"
#include "dfeg/lindblad/dfeg.hpp"

namespace dfeg {

/// One-component amplitude on a grid: the positive-frequency branch of the
/// nonrelativistic reduction, with the rest-energy phase removed.
class ScalarField {
 public:
  explicit ScalarField(Grid grid);
  ScalarField(Grid grid, std::vector<cplx> values);

  const Grid& grid() const { return grid_; }
  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }

  double norm() const;
  ScalarField normalized() const;
  cplx inner(const ScalarField& other) const;
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

/// exp(-(z-z0)^2/(4 w^2) + i p0 z/hbar), normalized. Same leakage checks as
/// make_gaussian_packet.
ScalarField make_scalar_gaussian(const Grid& grid, double z0, double p0, double width,
                                 double hbar = 1.0);

/// -(hbar^2/4m) delta'(z - z_m), smeared as the antisymmetric difference
/// [G(z - z_m + w) - G(z - z_m - w)]/(2w) of unit Gaussians of width w.
struct DeltaPrimeTerm {
  double z_mirror = 0.0;
  double reg_width = 0.0;  // 0 selects 2 dz
  double weight_scale = 1.0;
};

struct SchrodingerOptions {
  PotentialMode potential = PotentialMode::conservative;  // m g z or none
  std::optional<MirrorConfig> wall;                        // mass_step read as a V0 step
  std::optional<DeltaPrimeTerm> delta_prime;
  bool check_boundary = true;
  double leak_threshold = 1e-6;
};

/// Potential V(z) of the scalar problem for the given options.
std::vector<double> schrodinger_potential(const Grid& grid, const HamiltonianConfig& cfg,
                                          const SchrodingerOptions& options);

/// Columns t, z, p3, width, norm.
const std::vector<std::string>& scalar_columns();

struct ScalarTrajectory {
  TimeSeries series;
  std::vector<double> auto_t;
  std::vector<cplx> autocorrelation;  // <phi(0)|phi(t)>
  ScalarField final_state;
};

/// Strang split-operator evolution under p^2/2m + V(z).
ScalarTrajectory schrodinger_propagate(const ScalarField& phi, const HamiltonianConfig& cfg,
                                       double dt, std::size_t n_steps, std::size_t record_every,
                                       const SchrodingerOptions& options = {});

/// Scalar density matrix rho_+ (N x N, Tr = 1, discrete normalization).
/// full: -(i/hbar)[p^2/2m, rho] + gamma (u rho u^dag - rho), u = e^{-i z/(x0 sigma)}
/// conservative: -(i/hbar)[p^2/2m + m g z, rho]
enum class NonrelMode { full, conservative };

/// One step U_K(dt/2) E(dt) U_K(dt/2) of the scalar master equation: the
/// kinetic flow by FFT and the position-diagonal part exactly entry by entry.
/// Trace and positivity are preserved by construction. N <= 256.
Eigen::MatrixXcd nonrel_dfeg_step(const Eigen::MatrixXcd& rho, const Grid& grid,
                                  const HamiltonianConfig& cfg, const DfegParams& params,
                                  double dt, NonrelMode mode = NonrelMode::full);

/// gamma (u rho u^dag - rho).
Eigen::MatrixXcd nonrel_dissipator(const Eigen::MatrixXcd& rho, const Grid& grid,
                                   const HamiltonianConfig& cfg, const DfegParams& params);

struct NonrelDenseRun {
  TimeSeries series;  // t, z, p3, purity, trace
  Eigen::MatrixXcd final_state;
  double x0 = 0.0;
  double min_eigenvalue = 1.0;
};

/// Repeated nonrel_dfeg_step with sub-steps below max_substep.
NonrelDenseRun evolve_nonrel_dense(const Eigen::MatrixXcd& rho0, const Grid& grid,
                                   const HamiltonianConfig& cfg, const DfegParams& params,
                                   double dt, std::size_t n_steps, NonrelMode mode,
                                   double max_substep = 0.01);

/// Spin-orbit vector a x p of the 3D nonrelativistic Hamiltonian. It vanishes
/// whenever a and p are parallel, which is always the case in one dimension.
std::array<double, 3> fw_spin_orbit_vector(const std::array<double, 3>& a,
                                           const std::array<double, 3>& p);

enum class LimitScenario { free_fall, dfeg, qbounce_static };

std::string to_string(LimitScenario s);
LimitScenario limit_scenario_from_string(const std::string& s);

/// Scenario geometry; natural units with m = hbar = 1 and c taken from c_list.
struct LimitOptions {
  double g = 1.0;
  double z0 = 0.0;
  double width = 1.0;         // keeps p/mc small enough for the c = 20 tolerance
  double t_end = 2.0;
  double record_dt = 0.02;
  std::size_t n_points = 2048;
  double z_min = -14.0;
  double z_max = 10.0;
  double dt_fraction = 0.1;  // Dirac dt as a fraction of t_zitt
  double sigma = 200.0;      // dfeg scenario
  double mirror_v0 = 10.0;   // qbounce_static, in units of m c^2
  double mirror_z = -6.0;    // qbounce_static; keep several widths below z0
  double mirror_reg_width = 0.1;  // erfc smoothing of the wall in both models
};

struct LimitRow {
  double c = 0.0;
  LimitScenario scenario = LimitScenario::free_fall;
  double rms_error = 0.0;     // RMS of <z>_Dirac - <z>_Schrodinger over the records
  double fall_distance = 0.0;
};

struct LimitTable {
  std::vector<LimitRow> rows;
  double fitted_slope = 0.0;  // least-squares slope of log rms vs log c

  /// Columns c, scenario, rms_error, fitted_slope.
  std::string to_csv() const;
};

/// Runs the Dirac model from positive-energy data and the Schrodinger model
/// from the matching envelope for each c, and fits the error slope.
LimitTable limit_convergence_study(const std::vector<double>& c_list, LimitScenario scenario,
                                   const LimitOptions& options = {});

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dfeg
