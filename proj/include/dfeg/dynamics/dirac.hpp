#pragma once

#include <functional>
#include <vector>

#include "dfeg/core/config.hpp"
#include "dfeg/core/spinor.hpp"
#include "dfeg/core/timeseries.hpp"
#include "dfeg/kernels/kernels.hpp"

namespace dfeg {

enum class Execution { serial, parallel };

/// Recorded run of the Dirac dynamics.
struct Trajectory {
  std::vector<double> times;            // recorded time stamps
  TimeSeries series;                    // standard_columns(), one row per stamp
  std::vector<double> z_theta;          // integral of z*Theta per stamp
  std::vector<double> state_times;      // stamps of the kept states
  std::vector<SpinorField> states;      // thinned states; the final state is always kept
  double record_dt = 0.0;

  const SpinorField& final_state() const { return states.back(); }
};

struct PropagateOptions {
  std::size_t keep_state_every = 0;  // keep every k-th recorded state (0: final only)
  bool check_boundary = true;
  double leak_threshold = 1e-6;
  std::size_t leak_cells = 5;
  bool enforce_dt_bound = true;      // require dt <= 0.1 t_zitt
  Execution execution = Execution::parallel;
  double t0 = 0.0;
  std::function<void(double, const SpinorField&)> observer;  // called at every record
};

/// E(p) = sqrt(c^2 p^2 + m^2 c^4) at wavenumber k.
double free_energy(double k, const HamiltonianConfig& cfg);

/// Per-mode coefficients of exp(-i (c alpha3 p + beta m c^2) dt/hbar).
std::vector<kernels::KineticMode> kinetic_modes(const Grid& grid, const HamiltonianConfig& cfg,
                                                double dt);

/// Exact free-Hamiltonian step, mode by mode in momentum space.
SpinorField kinetic_step(const SpinorField& psi, double dt, const HamiltonianConfig& cfg);

/// Coefficient V(z, t) multiplying beta: m g z (conservative mode) plus the mirror term.
std::vector<double> beta_potential(const Grid& grid, const HamiltonianConfig& cfg, double t);

/// Multiplies by diag(e^{-i V dt/hbar} I2, e^{+i V dt/hbar} I2) with V = m g z.
/// The mirror is not included; see mirror_potential_step.
SpinorField potential_step(const SpinorField& psi, double dt, const HamiltonianConfig& cfg);

/// Applies exp(-i H_R dt/hbar) with H_R = (g/2c) alpha3 {z, p} by a truncated
/// Taylor series on sub-steps short enough that each factor has norm <= 1/2.
SpinorField redshift_step(const SpinorField& psi, double dt, const HamiltonianConfig& cfg);

/// H_R psi (spectral {z, p}).
SpinorField apply_redshift_hamiltonian(const SpinorField& psi, const HamiltonianConfig& cfg);

/// In-place Strang stepper: V(dt/2) [R(dt/2)] K(dt) [R(dt/2)] V(dt/2), where V
/// holds gravity and the mirror and R is the optional redshift factor.
class StrangStepper {
 public:
  StrangStepper(const Grid& grid, const HamiltonianConfig& cfg, double dt,
                Execution execution = Execution::parallel);

  /// Advances the component-major buffer from t to t + dt.
  void step(std::vector<cplx>& psi, double t);
  double dt() const { return dt_; }

 private:
  void apply_potential(std::vector<cplx>& psi, double t);
  void apply_kinetic(std::vector<cplx>& psi);

  Grid grid_;
  HamiltonianConfig cfg_;
  double dt_;
  Execution exec_;
  bool time_dependent_;
  std::vector<cplx> half_phase_;
  std::vector<kernels::KineticMode> modes_;
};

/// Strang-split evolution for n_steps, recording every record_every steps
/// (and always at t0). Throws BoundaryLeakError when more than leak_threshold
/// probability sits within leak_cells of either edge.
Trajectory propagate(const SpinorField& psi, const HamiltonianConfig& cfg, double dt,
                     std::size_t n_steps, std::size_t record_every,
                     const PropagateOptions& options = {});

/// H_free psi with H_free = c alpha3 p + beta m c^2.
SpinorField apply_free_hamiltonian(const SpinorField& psi, const HamiltonianConfig& cfg);

/// Lambda_sign psi = (E + sign H_free)/(2E) psi per mode, not renormalized.
SpinorField apply_energy_projector(const SpinorField& psi, int sign, const HamiltonianConfig& cfg);

/// Projects onto the sign-energy subspace and renormalizes. Throws
/// NumericalError when the projected norm is below 1e-12.
SpinorField project_energy(const SpinorField& psi, int sign, const HamiltonianConfig& cfg);

/// i gamma^2 psi^*.
SpinorField charge_conjugate(const SpinorField& psi);

struct EhrenfestResiduals {
  double position = 0.0;  // max |d<z>/dt - c <alpha3>|
  double momentum = 0.0;  // max |d<p3>/dt + m g <beta>|
};

/// Centered differences on a uniformly recorded trajectory of H_g.
EhrenfestResiduals ehrenfest_residuals(const Trajectory& traj, const HamiltonianConfig& cfg);

struct Gamma5Diagnostics {
  std::vector<double> t;
  std::vector<double> rate;           // centered-difference d<gamma5>/dt
  std::vector<double> predicted;      // (2m/hbar)(c^2 Theta + g int z Theta)
  std::vector<double> theta_yt;
  double max_residual = 0.0;
};

/// Checks d<gamma5>/dt = (2m/i hbar)(<c^2 gamma5 beta> + <gamma5 beta g z>).
Gamma5Diagnostics gamma5_diagnostics(const Trajectory& traj, const HamiltonianConfig& cfg);

/// (2m/hbar)(c^2 Theta + g int z Theta) evaluated on a single state.
double gamma5_rate(const SpinorField& psi, const HamiltonianConfig& cfg);

struct Series {
  std::vector<double> t;
  std::vector<double> value;
};

/// Centered second difference of <z>: the mean acceleration <a3>.
Series acceleration_series(const Trajectory& traj);

}  // namespace dfeg
