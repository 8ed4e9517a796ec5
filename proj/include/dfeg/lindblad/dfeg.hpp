#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dfeg/core/config.hpp"
#include "dfeg/core/density.hpp"
#include "dfeg/core/timeseries.hpp"
#include "dfeg/dynamics/dirac.hpp"

namespace dfeg {

/// x0 = (hbar^2 / (2 m^2 g))^(1/3).
double default_x0(const HamiltonianConfig& cfg);

/// Coupling of the entropic reservoir. gamma_rate = m g x0 sigma / hbar.
struct DfegParams {
  double sigma = 100.0;
  double x0 = 1.0;
  double gamma_rate = 0.0;
  bool dissipator_enabled = true;  // false gives the bare H_S evolution

  /// x0 <= 0 selects default_x0(cfg).
  static DfegParams make(double sigma, const HamiltonianConfig& cfg, double x0 = 0.0);
  void validate() const;
  /// m g / (x0 hbar sigma): prefactor of the expanded dissipator.
  double kappa(const HamiltonianConfig& cfg) const;
};

/// U = exp(-i beta z/(x0 sigma)) stored as per-entry phases and values in
/// SpinorField index order; A = amplitude * U.
struct JumpOperator {
  std::vector<double> phase;
  std::vector<cplx> u;
  double amplitude = 0.0;  // sqrt(m g x0)
};

JumpOperator build_jump(const Grid& grid, const HamiltonianConfig& cfg, const DfegParams& params);

struct ConstraintResiduals {
  double momentum = 0.0;
  double position = 0.0;
};

/// Max residuals of A^dag dA/dp - dA^dag/dp A = 0 and
/// A^dag dA/dz - dA^dag/dz A = -(2 i m g/sigma) beta, with dA/dz = -(i beta/(x0 sigma)) A.
ConstraintResiduals verify_jump_constraints(const DfegParams& params, const Grid& grid,
                                            const HamiltonianConfig& cfg);

enum class LindbladMode { full, expanded, conservative };

/// full: -(i/hbar)[H_S, rho] + gamma (U rho U^dag - rho)
/// expanded: -(i/hbar)[H_g, rho] + kappa (beta z rho z beta - {z^2, rho}/2)
/// conservative: -(i/hbar)[H_g, rho]
/// rho must be Hermitian.
Eigen::MatrixXcd lindblad_rhs(const DensityMatrix& rho, const HamiltonianConfig& cfg,
                              const DfegParams& params, LindbladMode mode,
                              Execution execution = Execution::parallel);

/// Dissipative part only (full: gamma(U rho U^dag - rho); expanded: kappa term).
Eigen::MatrixXcd dissipator_only(const DensityMatrix& rho, const HamiltonianConfig& cfg,
                                 const DfegParams& params, LindbladMode mode);

/// rk4_interaction: RK4 in the interaction picture of H_S.
/// strang_exact: U(h/2) E(h) U(h/2) with the exact H_S flow U and the exact
/// entry-wise flow E of the position-diagonal part; second order, CPTP by
/// construction, and insensitive to stiff potentials such as a mirror step.
enum class DenseIntegrator { rk4_interaction, strang_exact };

struct DenseOptions {
  std::size_t record_every = 1;
  std::size_t keep_state_every = 0;  // 0: final state only
  std::size_t positivity_every = 0;  // check eigenvalues every k records (0: final only)
  double positivity_tolerance = 1e-8;
  bool check_boundary = true;
  double leak_threshold = 1e-6;
  Execution execution = Execution::parallel;
  DenseIntegrator integrator = DenseIntegrator::rk4_interaction;
  std::function<void(double, const DensityMatrix&)> observer;  // called at every record
};

struct DenseRun {
  TimeSeries series;
  std::vector<double> state_times;
  std::vector<DensityMatrix> states;
  std::size_t substeps = 0;            // RK4 sub-steps per outer step
  double min_eigenvalue = 1.0;         // smallest eigenvalue seen at checks
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;  // before each re-symmetrization
  double max_purity_increase = 0.0;    // largest step-to-step increase of Tr rho^2

  const DensityMatrix& final_state() const { return states.back(); }
};

/// Sub-step used by evolve_dense: min(0.1 t_zitt, 0.1 / max|C_IJ|) where C_IJ
/// are the multipliers of the position-diagonal part of the generator
/// (dissipator plus beta-diagonal potentials).
double dense_substep_limit(const Grid& grid, const HamiltonianConfig& cfg,
                           const DfegParams& params, LindbladMode mode);

/// Sub-step used by the strang_exact integrator: min(0.1 t_zitt, 0.5 hbar / spread)
/// where spread is the range of the beta-diagonal potential (mirror included).
double strang_substep_limit(const Grid& grid, const HamiltonianConfig& cfg,
                            const DfegParams& params, LindbladMode mode);

/// RK4 on the superoperator in the interaction picture of H_S (the H_S flow
/// U rho U^dag is applied exactly through FFTs). Each outer step dt is split
/// into equal sub-steps below dense_substep_limit; rho is re-symmetrized after
/// every sub-step. options.integrator = strang_exact swaps in the split flow
/// with sub-steps below strang_substep_limit.
/// Throws PositivityError when the minimum eigenvalue drops below
/// -positivity_tolerance, ConfigError for N > 256.
DenseRun evolve_dense(const DensityMatrix& rho0, const HamiltonianConfig& cfg,
                      const DfegParams& params, double dt, std::size_t n_steps, LindbladMode mode,
                      const DenseOptions& options = {});

/// Columns added to standard_columns() by ensemble runs.
const std::vector<std::string>& ensemble_columns();

struct UnravelOptions {
  std::size_t record_every = 1;
  bool keep_final_states = false;
  Execution execution = Execution::parallel;
};

struct Ensemble {
  std::size_t n_traj = 0;
  std::uint64_t seed = 0;
  TimeSeries series;                              // ensemble_columns()
  std::vector<std::vector<double>> jump_times;    // per trajectory
  std::vector<SpinorField> final_states;          // when requested
};

/// Monte-Carlo unraveling: between Poisson(gamma) jump times each trajectory
/// evolves exactly under H_S; a jump multiplies by U. Trajectory k draws from
/// CounterRng(seed, k). The purity column estimates Tr rho^2 by
/// |<psi_2k|psi_2k+1>|^2 averaged over disjoint pairs.
Ensemble unravel(const SpinorField& psi0, const HamiltonianConfig& cfg, const DfegParams& params,
                 double dt, std::size_t n_steps, std::size_t n_traj, std::uint64_t seed,
                 const UnravelOptions& options = {});

struct PurityRate {
  double numeric = 0.0;   // 2 Re Tr[rho L_expanded(rho)]
  double formula = 0.0;   // -2 kappa Tr[rho^2 z^2 - (rho beta z)^2]
  double witness = 0.0;   // Tr[rho^2 z^2 - (rho beta z)^2]
};

PurityRate purity_rate_check(const DensityMatrix& rho, const DfegParams& params,
                             const HamiltonianConfig& cfg);

struct EnergyRate {
  double numeric = 0.0;   // Tr[H_g L_expanded(rho)] - Tr[H_g (-i/hbar)[H_g, rho]]
  double formula = 0.0;   // -(2 m g c/(x0 hbar sigma)) <alpha3 z p z>
};

EnergyRate energy_rate_check(const DensityMatrix& rho, const DfegParams& params,
                             const HamiltonianConfig& cfg);

/// max over j = 1, 2, 3 of the largest entry of gamma (U S_j U^dag - S_j).
double spin_dissipator_check(const DfegParams& params, const Grid& grid,
                             const HamiltonianConfig& cfg);

/// Applies H_g (or H_S when with_gravity is false) to every column of m.
Eigen::MatrixXcd apply_hamiltonian_columns(const Eigen::MatrixXcd& m, const Grid& grid,
                                           const HamiltonianConfig& cfg, bool with_gravity,
                                           Execution execution = Execution::parallel);

}  // namespace dfeg
