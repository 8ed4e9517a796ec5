#include "dfeg/lindblad/dfeg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dfeg/core/fft.hpp"
#include "dfeg/core/gamma.hpp"
#include "dfeg/core/observables.hpp"
#include "dfeg/core/rng.hpp"
#include "dfeg/qbounce/mirror.hpp"

namespace dfeg {

double default_x0(const HamiltonianConfig& cfg) {
  if (!(cfg.g > 0.0)) throw ConfigError("x0: default length needs g > 0");
  return std::cbrt(cfg.hbar * cfg.hbar / (2.0 * cfg.mass * cfg.mass * cfg.g));
}

DfegParams DfegParams::make(double sigma, const HamiltonianConfig& cfg, double x0) {
  DfegParams p;
  p.sigma = sigma;
  if (!(sigma > 0.0)) throw ConfigError("dfeg.sigma must be > 0");
  p.x0 = x0 > 0.0 ? x0 : default_x0(cfg);
  p.gamma_rate = cfg.mass * cfg.g * p.x0 * sigma / cfg.hbar;
  return p;
}

void DfegParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("dfeg.sigma must be > 0");
  if (!(x0 > 0.0) || !std::isfinite(x0)) throw ConfigError("dfeg.x0 must be > 0");
  if (!(gamma_rate >= 0.0)) throw ConfigError("dfeg.gamma_rate must be >= 0");
}

double DfegParams::kappa(const HamiltonianConfig& cfg) const {
  return cfg.mass * cfg.g / (x0 * cfg.hbar * sigma);
}

namespace {

// Sub-step bound h * max|C_IJ| for the position-diagonal superoperator.
constexpr double kDenseStiffnessFactor = 0.1;
// Largest potential phase difference per Strang sub-step.
constexpr double kStrangPhaseBound = 0.5;

double beta_of(std::size_t index, std::size_t n) { return index < 2 * n ? 1.0 : -1.0; }

// beta_I z_I in SpinorField index order.
std::vector<double> beta_z(const Grid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> w(4 * n);
  for (std::size_t I = 0; I < 4 * n; ++I) w[I] = beta_of(I, n) * grid.z(I % n);
  return w;
}

// beta_I V_I for the beta-diagonal part of the generator: m g z when
// with_gravity, plus the mirror.
std::vector<double> beta_diagonal(const Grid& grid, const HamiltonianConfig& cfg, bool with_gravity,
                                  double t) {
  const std::size_t n = grid.size();
  std::vector<double> v(n, 0.0);
  if (with_gravity) {
    for (std::size_t i = 0; i < n; ++i) v[i] = cfg.mass * cfg.g * grid.z(i);
  }
  if (cfg.mirror) {
    const auto m = mirror_profile(grid, *cfg.mirror, cfg, t);
    for (std::size_t i = 0; i < n; ++i) v[i] += m[i];
  }
  std::vector<double> d(4 * n);
  for (std::size_t I = 0; I < 4 * n; ++I) d[I] = beta_of(I, n) * v[I % n];
  return d;
}

void hamiltonian_inplace(cplx* data, std::size_t n, std::size_t cols, const Grid& grid,
                         const HamiltonianConfig& cfg, Execution exec) {
  std::vector<double> cp(n);
  for (std::size_t k = 0; k < n; ++k) cp[k] = cfg.c * cfg.hbar * grid.k(k);
  const double mc2 = cfg.rest_energy();
  if (exec == Execution::parallel) {
    kernels::omp::fft_columns(data, n, cols, -1);
    kernels::omp::hamiltonian_modes(data, n, cols, cp, mc2);
    kernels::omp::fft_columns(data, n, cols, +1);
  } else {
    kernels::serial::fft_columns(data, n, cols, -1);
    kernels::serial::hamiltonian_modes(data, n, cols, cp, mc2);
    kernels::serial::fft_columns(data, n, cols, +1);
  }
}

struct Separable {
  std::vector<cplx> a, b, c, e;
};

Separable separable_terms(const Grid& grid, const HamiltonianConfig& cfg, const DfegParams& params,
                          LindbladMode mode, bool include_unitary_diagonal, bool include_dissipator,
                          double t) {
  const std::size_t d = 4 * grid.size();
  Separable s{std::vector<cplx>(d), std::vector<cplx>(d), std::vector<cplx>(d),
              std::vector<cplx>(d)};
  const bool gravity = mode != LindbladMode::full;
  if (include_unitary_diagonal) {
    const auto diag = beta_diagonal(grid, cfg, gravity, t);
    for (std::size_t I = 0; I < d; ++I) {
      s.c[I] += cplx{0.0, -diag[I] / cfg.hbar};
      s.e[I] += cplx{0.0, diag[I] / cfg.hbar};
    }
  }
  if (include_dissipator && params.dissipator_enabled) {
    if (mode == LindbladMode::full) {
      const JumpOperator jump = build_jump(grid, cfg, params);
      for (std::size_t I = 0; I < d; ++I) {
        s.a[I] = params.gamma_rate * jump.u[I];
        s.b[I] = jump.u[I];
        s.c[I] -= params.gamma_rate;
      }
    } else if (mode == LindbladMode::expanded) {
      const double kap = params.kappa(cfg);
      const auto w = beta_z(grid);
      for (std::size_t I = 0; I < d; ++I) {
        s.a[I] = kap * w[I];
        s.b[I] = w[I];
        s.c[I] -= 0.5 * kap * w[I] * w[I];
        s.e[I] -= 0.5 * kap * w[I] * w[I];
      }
    }
  }
  return s;
}

void apply_separable(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out, const Separable& s,
                     Execution exec) {
  const auto d = static_cast<std::size_t>(rho.rows());
  if (exec == Execution::parallel) {
    kernels::omp::separable_superop(rho.data(), out.data(), d, s.a, s.b, s.c, s.e);
  } else {
    kernels::serial::separable_superop(rho.data(), out.data(), d, s.a, s.b, s.c, s.e);
  }
}

// out = separable(rho) - (i/hbar)(H_S rho - (H_S rho)^dag).
void rhs_into(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out, Eigen::MatrixXcd& work,
              const Grid& grid, const HamiltonianConfig& cfg, const Separable& s, Execution exec) {
  const std::size_t n = grid.size();
  work = rho;
  hamiltonian_inplace(work.data(), n, static_cast<std::size_t>(rho.cols()), grid, cfg, exec);
  apply_separable(rho, out, s, exec);
  const cplx f{0.0, -1.0 / cfg.hbar};
  out.noalias() += f * work;
  out.noalias() -= f * work.adjoint();
}

// X <- U X U^dag with U = exp(-i H_S tau/hbar) given by `modes`.
void conjugate_unitary(Eigen::MatrixXcd& x, Eigen::MatrixXcd& scratch,
                       const std::vector<kernels::KineticMode>& modes, std::size_t n,
                       Execution exec) {
  const auto d = static_cast<std::size_t>(x.rows());
  auto left = [&](Eigen::MatrixXcd& m) {
    if (exec == Execution::parallel) {
      kernels::omp::fft_columns(m.data(), n, d, -1);
    } else {
      kernels::serial::fft_columns(m.data(), n, d, -1);
    }
    const auto nd = static_cast<std::ptrdiff_t>(d);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t j = 0; j < nd; ++j) {
        kernels::serial::kinetic_modes({m.data() + j * static_cast<std::ptrdiff_t>(d), d}, modes);
      }
    } else {
      for (std::ptrdiff_t j = 0; j < nd; ++j) {
        kernels::serial::kinetic_modes({m.data() + j * static_cast<std::ptrdiff_t>(d), d}, modes);
      }
    }
    if (exec == Execution::parallel) {
      kernels::omp::fft_columns(m.data(), n, d, +1);
    } else {
      kernels::serial::fft_columns(m.data(), n, d, +1);
    }
  };
  left(x);
  scratch = x.adjoint();
  left(scratch);
  x = scratch.adjoint();
}

// Exact flow of the position-diagonal part: entry-wise exp(h (a_I b_J^* + c_I + e_J)).
Eigen::MatrixXcd separable_flow(const Separable& s, double h) {
  const auto d = static_cast<Eigen::Index>(s.a.size());
  Eigen::MatrixXcd out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto J = static_cast<std::size_t>(j);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto I = static_cast<std::size_t>(i);
      out(i, j) = std::exp(h * (s.a[I] * std::conj(s.b[J]) + s.c[I] + s.e[J]));
    }
  }
  return out;
}

}  // namespace

JumpOperator build_jump(const Grid& grid, const HamiltonianConfig& cfg, const DfegParams& params) {
  params.validate();
  const std::size_t n = grid.size();
  JumpOperator j;
  j.phase.resize(4 * n);
  j.u.resize(4 * n);
  j.amplitude = std::sqrt(cfg.mass * cfg.g * params.x0);
  for (std::size_t I = 0; I < 4 * n; ++I) {
    j.phase[I] = -beta_of(I, n) * grid.z(I % n) / (params.x0 * params.sigma);
    j.u[I] = std::polar(1.0, j.phase[I]);
  }
  return j;
}

ConstraintResiduals verify_jump_constraints(const DfegParams& params, const Grid& grid,
                                            const HamiltonianConfig& cfg) {
  const JumpOperator jump = build_jump(grid, cfg, params);
  const std::size_t n = grid.size();
  ConstraintResiduals r;
  for (std::size_t I = 0; I < 4 * n; ++I) {
    const double b = beta_of(I, n);
    const cplx a = jump.amplitude * jump.u[I];
    const cplx da_dz = cplx{0.0, -b / (params.x0 * params.sigma)} * a;
    const cplx da_dp{0.0, 0.0};
    const cplx mom = std::conj(a) * da_dp - std::conj(da_dp) * a;
    const cplx pos = std::conj(a) * da_dz - std::conj(da_dz) * a;
    const cplx target{0.0, -2.0 * cfg.mass * cfg.g * b / params.sigma};
    r.momentum = std::max(r.momentum, std::abs(mom));
    r.position = std::max(r.position, std::abs(pos - target));
  }
  return r;
}

Eigen::MatrixXcd apply_hamiltonian_columns(const Eigen::MatrixXcd& m, const Grid& grid,
                                           const HamiltonianConfig& cfg, bool with_gravity,
                                           Execution execution) {
  const std::size_t n = grid.size();
  if (static_cast<std::size_t>(m.rows()) != 4 * n) throw DimensionError("columns must have 4N rows");
  Eigen::MatrixXcd out = m;
  hamiltonian_inplace(out.data(), n, static_cast<std::size_t>(m.cols()), grid, cfg, execution);
  const auto d = beta_diagonal(grid, cfg, with_gravity, 0.0);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) += d[static_cast<std::size_t>(i)] * m(i, j);
  }
  return out;
}

Eigen::MatrixXcd lindblad_rhs(const DensityMatrix& rho, const HamiltonianConfig& cfg,
                              const DfegParams& params, LindbladMode mode, Execution execution) {
  const Separable s = separable_terms(rho.grid(), cfg, params, mode, true, true, 0.0);
  Eigen::MatrixXcd out(rho.values().rows(), rho.values().cols());
  Eigen::MatrixXcd work;
  rhs_into(rho.values(), out, work, rho.grid(), cfg, s, execution);
  return out;
}

Eigen::MatrixXcd dissipator_only(const DensityMatrix& rho, const HamiltonianConfig& cfg,
                                 const DfegParams& params, LindbladMode mode) {
  const Separable s = separable_terms(rho.grid(), cfg, params, mode, false, true, 0.0);
  Eigen::MatrixXcd out(rho.values().rows(), rho.values().cols());
  apply_separable(rho.values(), out, s, Execution::serial);
  return out;
}

double dense_substep_limit(const Grid& grid, const HamiltonianConfig& cfg,
                           const DfegParams& params, LindbladMode mode) {
  double h = 0.1 * cfg.zitterbewegung_time();
  // The position-diagonal part multiplies rho_IJ by C_IJ; bound max |C_IJ|.
  const auto diag = beta_diagonal(grid, cfg, mode != LindbladMode::full, 0.0);
  double dmin = 0.0, dmax = 0.0;
  for (double x : diag) {
    dmin = std::min(dmin, x);
    dmax = std::max(dmax, x);
  }
  double stiff = (dmax - dmin) / cfg.hbar;
  if (params.dissipator_enabled && mode != LindbladMode::conservative) {
    const auto w = beta_z(grid);
    double wmin = 0.0, wmax = 0.0;
    for (double x : w) {
      wmin = std::min(wmin, x);
      wmax = std::max(wmax, x);
    }
    if (mode == LindbladMode::full) {
      const double spread = (wmax - wmin) / (params.x0 * params.sigma);
      stiff += params.gamma_rate * 2.0 * std::abs(std::sin(0.5 * std::min(spread, kPi)));
    } else {
      stiff += 0.5 * params.kappa(cfg) * (wmax - wmin) * (wmax - wmin);
    }
  }
  if (stiff > 0.0) h = std::min(h, kDenseStiffnessFactor / stiff);
  return h;
}

double strang_substep_limit(const Grid& grid, const HamiltonianConfig& cfg,
                            const DfegParams& params, LindbladMode mode) {
  (void)params;
  double h = 0.1 * cfg.zitterbewegung_time();
  const auto diag = beta_diagonal(grid, cfg, mode != LindbladMode::full, 0.0);
  double lo = 0.0, hi = 0.0;
  for (double v : diag) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (cfg.mirror) {
    // A moving mirror sweeps its profile over the grid.
    const double v0 = std::abs(cfg.mirror->v0) + std::abs(0.5 * cfg.hbar * cfg.c *
                                                          cfg.mirror->delta_weight_scale /
                                                          effective_reg_width(grid, *cfg.mirror));
    lo = std::min(lo, -v0);
    hi = std::max(hi, v0);
  }
  const double spread = (hi - lo) / cfg.hbar;
  if (spread > 0.0) h = std::min(h, kStrangPhaseBound / spread);
  return h;
}

DenseRun evolve_dense(const DensityMatrix& rho0, const HamiltonianConfig& cfg,
                      const DfegParams& params, double dt, std::size_t n_steps, LindbladMode mode,
                      const DenseOptions& options) {
  cfg.validate();
  params.validate();
  const Grid& grid = rho0.grid();
  if (grid.size() > 256) throw ConfigError("evolve_dense: N must be <= 256");
  if (!(dt > 0.0)) throw ConfigError("evolve_dense: dt must be > 0");
  if (options.record_every == 0) throw ConfigError("evolve_dense: record_every must be >= 1");
  if (cfg.mirror) validate_mirror(grid, *cfg.mirror, cfg);

  const bool strang = options.integrator == DenseIntegrator::strang_exact;
  const double hmax = strang ? strang_substep_limit(grid, cfg, params, mode)
                             : dense_substep_limit(grid, cfg, params, mode);
  const auto m = static_cast<std::size_t>(std::ceil(dt / hmax - 1e-12));
  const double h = dt / static_cast<double>(m);
  const bool time_dependent =
      cfg.mirror && cfg.mirror->amplitude != 0.0 && cfg.mirror->omega != 0.0;

  std::vector<std::string> cols = standard_columns();
  DenseRun run;
  run.series = TimeSeries(cols);
  run.substeps = m;

  Eigen::MatrixXcd rho = rho0.values();
  const auto d = rho.rows();
  Eigen::MatrixXcd k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d), work(d, d), rho_i(d, d);
  const std::size_t n = grid.size();
  const auto half_modes = kinetic_modes(grid, cfg, 0.5 * h);
  Separable s_t = separable_terms(grid, cfg, params, mode, true, true, 0.0);
  Separable s_mid = s_t, s_end = s_t;
  Eigen::MatrixXcd multiplier;

  std::size_t n_records = 0;
  auto check_positivity = [&](const DensityMatrix& state, double t) {
    const double ev = state.min_eigenvalue();
    run.min_eigenvalue = std::min(run.min_eigenvalue, ev);
    if (ev < -options.positivity_tolerance) {
      std::ostringstream msg;
      msg << "evolve_dense: min eigenvalue " << ev << " at t=" << t << " (sub-step " << h << ")";
      throw PositivityError(msg.str());
    }
  };
  auto record = [&](double t, bool final_step) {
    DensityMatrix state(grid, rho);
    run.series.push_row(measure(state, cfg.hbar).row(t));
    if (options.observer) options.observer(t, state);
    const bool keep = options.keep_state_every != 0 && n_records % options.keep_state_every == 0;
    if (keep || final_step) {
      run.state_times.push_back(t);
      run.states.push_back(state);
    }
    if ((options.positivity_every != 0 && n_records % options.positivity_every == 0) ||
        final_step) {
      check_positivity(state, t);
    }
    ++n_records;
  };
  record(0.0, n_steps == 0);

  double pur = rho.squaredNorm();
  for (std::size_t step = 1; step <= n_steps; ++step) {
    for (std::size_t sub = 0; sub < m; ++sub) {
      const double t = static_cast<double>(step - 1) * dt + static_cast<double>(sub) * h;
      if (time_dependent && !strang) {
        s_t = separable_terms(grid, cfg, params, mode, true, true, t);
        s_mid = separable_terms(grid, cfg, params, mode, true, true, t + 0.5 * h);
        s_end = separable_terms(grid, cfg, params, mode, true, true, t + h);
      }
      if (strang) {
        if (time_dependent || multiplier.size() == 0) {
          multiplier = separable_flow(
              separable_terms(grid, cfg, params, mode, true, true, t + 0.5 * h), h);
        }
        conjugate_unitary(rho, work, half_modes, n, options.execution);
        rho.array() *= multiplier.array();
        conjugate_unitary(rho, work, half_modes, n, options.execution);
      } else {
        // RK4 in the interaction picture of H_S: the H_S flow is applied
        // exactly, RK4 only integrates the position-diagonal part.
        const Eigen::MatrixXcd& r0 = rho;
        rho_i = r0;
        conjugate_unitary(rho_i, work, half_modes, n, options.execution);
        apply_separable(r0, k1, s_t, options.execution);
        conjugate_unitary(k1, work, half_modes, n, options.execution);
        tmp = rho_i + (0.5 * h) * k1;
        apply_separable(tmp, k2, s_mid, options.execution);
        tmp = rho_i + (0.5 * h) * k2;
        apply_separable(tmp, k3, s_mid, options.execution);
        tmp = rho_i + h * k3;
        conjugate_unitary(tmp, work, half_modes, n, options.execution);
        apply_separable(tmp, k4, s_end, options.execution);
        rho = rho_i + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3);
        conjugate_unitary(rho, work, half_modes, n, options.execution);
        rho += (h / 6.0) * k4;
      }
      run.max_hermiticity_error =
          std::max(run.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
      tmp = 0.5 * (rho + rho.adjoint());
      rho.swap(tmp);
      const double p = rho.squaredNorm();
      run.max_purity_increase = std::max(run.max_purity_increase, p - pur);
      pur = p;
    }
    const double t = static_cast<double>(step) * dt;
    run.max_trace_drift = std::max(run.max_trace_drift, std::abs(rho.trace() - rho0.trace()));
    if (!std::isfinite(pur)) throw NumericalError("evolve_dense: non-finite state");
    if (options.check_boundary) {
      const double leak = edge_probability(DensityMatrix(grid, rho));
      if (leak > options.leak_threshold) {
        std::ostringstream msg;
        msg << "evolve_dense: boundary leak " << leak << " at t=" << t;
        throw BoundaryLeakError(msg.str());
      }
    }
    if (step % options.record_every == 0 || step == n_steps) record(t, step == n_steps);
  }
  return run;
}

const std::vector<std::string>& ensemble_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = standard_columns();
    for (const char* extra : {"jump_count_mean", "se_z", "se_p", "se_purity"}) c.emplace_back(extra);
    return c;
  }();
  return cols;
}

namespace {

// Fields kept per trajectory and record.
enum Field { kBeta, kZ, kP, kAlpha3, kS1, kS2, kS3, kGamma5, kTheta, kPhi, kNorm, kJumps, kFields };

class TrajectoryRunner {
 public:
  TrajectoryRunner(const SpinorField& psi0, const HamiltonianConfig& cfg, const JumpOperator& jump,
                   double gamma, double h_rec, std::uint64_t seed, std::uint64_t index,
                   const std::vector<kernels::KineticMode>& rec_modes)
      : grid_(psi0.grid()), cfg_(cfg), jump_(jump), gamma_(gamma), h_rec_(h_rec),
        rng_(seed, index), psi_(psi0.storage()), rec_modes_(rec_modes) {
    next_jump_ = gamma_ > 0.0 ? rng_.exponential(gamma_) : std::numeric_limits<double>::infinity();
  }

  // Advances to record index k (time k*h_rec).
  void advance_to(std::size_t k) {
    const double target = static_cast<double>(k) * h_rec_;
    while (next_jump_ <= target) {
      evolve(next_jump_ - t_, nullptr);
      t_ = next_jump_;
      for (std::size_t I = 0; I < psi_.size(); ++I) psi_[I] *= jump_.u[I];
      jumps_.push_back(t_);
      next_jump_ += rng_.exponential(gamma_);
    }
    const double tau = target - t_;
    evolve(tau, std::abs(tau - h_rec_) <= 1e-14 * h_rec_ ? &rec_modes_ : nullptr);
    t_ = target;
  }

  SpinorField state() const { return SpinorField(grid_, psi_); }
  const std::vector<cplx>& raw() const { return psi_; }
  const std::vector<double>& jumps() const { return jumps_; }

 private:
  void evolve(double tau, const std::vector<kernels::KineticMode>* modes) {
    if (tau <= 0.0) return;
    const std::size_t n = grid_.size();
    kernels::serial::fft_columns(psi_.data(), n, 1, -1);
    if (modes != nullptr) {
      kernels::serial::kinetic_modes(psi_, *modes);
    } else {
      kernels::serial::kinetic_modes(psi_, kinetic_modes(grid_, cfg_, tau));
    }
    kernels::serial::fft_columns(psi_.data(), n, 1, +1);
  }

  Grid grid_;
  const HamiltonianConfig& cfg_;
  const JumpOperator& jump_;
  double gamma_;
  double h_rec_;
  CounterRng rng_;
  std::vector<cplx> psi_;
  const std::vector<kernels::KineticMode>& rec_modes_;
  double t_ = 0.0;
  double next_jump_;
  std::vector<double> jumps_;
};

void store(double* dst, const SpinorField& psi, double hbar, std::size_t jumps) {
  const Observables o = measure(psi, hbar);
  dst[kBeta] = o.beta;
  dst[kZ] = o.z;
  dst[kP] = o.p;
  dst[kAlpha3] = o.alpha3;
  dst[kS1] = o.S1;
  dst[kS2] = o.S2;
  dst[kS3] = o.S3;
  dst[kGamma5] = o.gamma5;
  dst[kTheta] = o.theta;
  dst[kPhi] = o.phi;
  dst[kNorm] = o.norm;
  dst[kJumps] = static_cast<double>(jumps);
}

}  // namespace

Ensemble unravel(const SpinorField& psi0, const HamiltonianConfig& cfg, const DfegParams& params,
                 double dt, std::size_t n_steps, std::size_t n_traj, std::uint64_t seed,
                 const UnravelOptions& options) {
  cfg.validate();
  params.validate();
  if (n_traj == 0) throw ConfigError("unravel: n_traj must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("unravel: dt must be > 0");
  if (options.record_every == 0) throw ConfigError("unravel: record_every must be >= 1");
  const Grid& grid = psi0.grid();
  const JumpOperator jump = build_jump(grid, cfg, params);
  const double gamma = params.dissipator_enabled ? params.gamma_rate : 0.0;
  const double h_rec = dt * static_cast<double>(options.record_every);
  const std::size_t n_rec = n_steps / options.record_every + 1;
  const auto rec_modes = kinetic_modes(grid, cfg, h_rec);

  std::vector<double> obs(n_traj * n_rec * kFields, 0.0);
  const std::size_t n_pairs = n_traj / 2;
  std::vector<double> overlap(n_pairs * n_rec, 0.0);
  Ensemble ens;
  ens.n_traj = n_traj;
  ens.seed = seed;
  ens.jump_times.resize(n_traj);
  if (options.keep_final_states) ens.final_states.assign(n_traj, SpinorField(grid));

  const std::size_t n_tasks = (n_traj + 1) / 2;
  auto run_task = [&](std::size_t task) {
    const std::size_t a = 2 * task;
    const bool paired = a + 1 < n_traj;
    TrajectoryRunner ra(psi0, cfg, jump, gamma, h_rec, seed, a, rec_modes);
    std::optional<TrajectoryRunner> rb;
    if (paired) rb.emplace(psi0, cfg, jump, gamma, h_rec, seed, a + 1, rec_modes);
    for (std::size_t k = 0; k < n_rec; ++k) {
      ra.advance_to(k);
      const SpinorField sa = ra.state();
      store(&obs[(a * n_rec + k) * kFields], sa, cfg.hbar, ra.jumps().size());
      if (paired) {
        rb->advance_to(k);
        const SpinorField sb = rb->state();
        store(&obs[((a + 1) * n_rec + k) * kFields], sb, cfg.hbar, rb->jumps().size());
        overlap[task * n_rec + k] = std::norm(sa.inner(sb)) / (sa.norm() * sb.norm());
      }
    }
    ens.jump_times[a] = ra.jumps();
    if (options.keep_final_states) ens.final_states[a] = ra.state();
    if (paired) {
      ens.jump_times[a + 1] = rb->jumps();
      if (options.keep_final_states) ens.final_states[a + 1] = rb->state();
    }
  };

  const auto nt = static_cast<std::ptrdiff_t>(n_tasks);
  if (options.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t task = 0; task < nt; ++task) run_task(static_cast<std::size_t>(task));
  } else {
    for (std::ptrdiff_t task = 0; task < nt; ++task) run_task(static_cast<std::size_t>(task));
  }

  ens.series = TimeSeries(ensemble_columns());
  const double nt_d = static_cast<double>(n_traj);
  for (std::size_t k = 0; k < n_rec; ++k) {
    double mean[kFields] = {};
    double sq_z = 0.0, sq_p = 0.0;
    for (std::size_t j = 0; j < n_traj; ++j) {
      const double* o = &obs[(j * n_rec + k) * kFields];
      for (int f = 0; f < kFields; ++f) mean[f] += o[f];
    }
    for (double& v : mean) v /= nt_d;
    for (std::size_t j = 0; j < n_traj; ++j) {
      const double* o = &obs[(j * n_rec + k) * kFields];
      sq_z += (o[kZ] - mean[kZ]) * (o[kZ] - mean[kZ]);
      sq_p += (o[kP] - mean[kP]) * (o[kP] - mean[kP]);
    }
    const double se_z = n_traj > 1 ? std::sqrt(sq_z / (nt_d - 1.0) / nt_d) : 0.0;
    const double se_p = n_traj > 1 ? std::sqrt(sq_p / (nt_d - 1.0) / nt_d) : 0.0;
    double pur = std::numeric_limits<double>::quiet_NaN();
    double se_pur = std::numeric_limits<double>::quiet_NaN();
    if (n_pairs > 0) {
      double s = 0.0;
      for (std::size_t q = 0; q < n_pairs; ++q) s += overlap[q * n_rec + k];
      pur = s / static_cast<double>(n_pairs);
      if (n_pairs > 1) {
        double v = 0.0;
        for (std::size_t q = 0; q < n_pairs; ++q) {
          const double x = overlap[q * n_rec + k] - pur;
          v += x * x;
        }
        se_pur = std::sqrt(v / static_cast<double>(n_pairs - 1) / static_cast<double>(n_pairs));
      }
    }
    const double t = static_cast<double>(k) * h_rec;
    ens.series.push_row({t, mean[kBeta], mean[kZ], mean[kP], mean[kAlpha3], mean[kS1], mean[kS2],
                         mean[kS3], mean[kGamma5], mean[kTheta], mean[kPhi],
                         std::atan2(mean[kTheta], mean[kPhi]), mean[kNorm], pur, mean[kJumps],
                         se_z, se_p, se_pur});
  }
  return ens;
}

PurityRate purity_rate_check(const DensityMatrix& rho, const DfegParams& params,
                             const HamiltonianConfig& cfg) {
  const Eigen::MatrixXcd rhs = lindblad_rhs(rho, cfg, params, LindbladMode::expanded);
  PurityRate r;
  r.numeric = 2.0 * (rho.values().cwiseProduct(rhs.transpose())).sum().real();
  const Grid& grid = rho.grid();
  const std::size_t n = grid.size();
  const auto dim = static_cast<Eigen::Index>(4 * n);
  Eigen::VectorXd z(dim), w(dim);
  for (Eigen::Index I = 0; I < dim; ++I) {
    const auto idx = static_cast<std::size_t>(I);
    z[I] = grid.z(idx % n);
    w[I] = beta_of(idx, n) * z[I];
  }
  const Eigen::MatrixXcd rho2 = rho.values() * rho.values();
  const Eigen::MatrixXcd rw = rho.values() * w.asDiagonal();
  const cplx t1 = (rho2 * z.cwiseProduct(z).asDiagonal()).trace();
  const cplx t2 = (rw * rw).trace();
  r.witness = (t1 - t2).real();
  r.formula = -2.0 * params.kappa(cfg) * r.witness;
  return r;
}

EnergyRate energy_rate_check(const DensityMatrix& rho, const DfegParams& params,
                             const HamiltonianConfig& cfg) {
  const Grid& grid = rho.grid();
  const std::size_t n = grid.size();
  const Eigen::MatrixXcd total = lindblad_rhs(rho, cfg, params, LindbladMode::expanded);
  const Eigen::MatrixXcd unitary = lindblad_rhs(rho, cfg, params, LindbladMode::conservative);
  const Eigen::MatrixXcd h_total = apply_hamiltonian_columns(total, grid, cfg, true);
  const Eigen::MatrixXcd h_unit = apply_hamiltonian_columns(unitary, grid, cfg, true);
  EnergyRate r;
  r.numeric = (h_total.trace() - h_unit.trace()).real();

  // Tr[alpha3 z p z rho], column by column.
  const auto dim = static_cast<Eigen::Index>(4 * n);
  Eigen::MatrixXcd m = rho.values();
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index I = 0; I < dim; ++I) m(I, j) *= grid.z(static_cast<std::size_t>(I) % n);
  }
  const auto plan = FftPlan::get(n);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (int c = 0; c < 4; ++c) {
      cplx* col = m.data() + j * dim + static_cast<Eigen::Index>(c) * static_cast<Eigen::Index>(n);
      plan->forward(col);
      for (std::size_t k = 0; k < n; ++k) col[k] *= cfg.hbar * grid.k(k);
      plan->backward(col);
    }
  }
  cplx tr{};
  for (Eigen::Index I = 0; I < dim; ++I) {
    // (alpha3 v)_I pairs component 0<->2 with +1 and 1<->3 with -1.
    const auto idx = static_cast<std::size_t>(I);
    const std::size_t c = idx / n, i = idx % n;
    const std::size_t partner = ((c + 2) % 4) * n + i;
    const double sign = (c == 0 || c == 2) ? 1.0 : -1.0;
    tr += sign * grid.z(i) * m(static_cast<Eigen::Index>(partner), I);
  }
  r.formula = -2.0 * params.kappa(cfg) * cfg.c * tr.real();
  return r;
}

double spin_dissipator_check(const DfegParams& params, const Grid& grid,
                             const HamiltonianConfig& cfg) {
  const JumpOperator jump = build_jump(grid, cfg, params);
  const std::size_t n = grid.size();
  const GammaSet& gs = gammas();
  double worst = 0.0;
  for (int j = 1; j <= 3; ++j) {
    const Eigen::Matrix4cd s = gs.spin(j, cfg.hbar);
    for (std::size_t i = 0; i < n; ++i) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          const double dphi = jump.phase[static_cast<std::size_t>(a) * n + i] -
                              jump.phase[static_cast<std::size_t>(b) * n + i];
          const cplx d = params.gamma_rate * (s(a, b) * std::polar(1.0, dphi) - s(a, b));
          worst = std::max(worst, std::abs(d));
        }
      }
    }
  }
  return worst;
}

}  // namespace dfeg
