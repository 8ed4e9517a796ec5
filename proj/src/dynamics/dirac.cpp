#include "dfeg/dynamics/dirac.hpp"

#include <cmath>
#include <sstream>

#include "dfeg/core/fft.hpp"
#include "dfeg/core/observables.hpp"
#include "dfeg/qbounce/mirror.hpp"

namespace dfeg {

namespace {

void fft_spinor(std::vector<cplx>& v, std::size_t n, int sign, Execution exec) {
  if (exec == Execution::parallel) {
    kernels::omp::fft_columns(v.data(), n, 1, sign);
  } else {
    kernels::serial::fft_columns(v.data(), n, 1, sign);
  }
}

// Applies per-mode 2x2 blocks [[a, b], [b, d]] on (0,2) and [[a, -b], [-b, d]]
// on (1,3) to a momentum-space spinor.
template <class Coeffs>
SpinorField apply_mode_blocks(const SpinorField& psi, Coeffs coeffs) {
  const std::size_t n = psi.points();
  std::vector<cplx> v(psi.storage());
  fft_spinor(v, n, -1, Execution::serial);
  std::vector<kernels::KineticMode> modes(n);
  for (std::size_t k = 0; k < n; ++k) modes[k] = coeffs(psi.grid().k(k));
  kernels::serial::kinetic_modes(v, modes);
  fft_spinor(v, n, +1, Execution::serial);
  return SpinorField(psi.grid(), std::move(v));
}

// out = alpha3 in for component-major buffers.
void apply_alpha3(const std::vector<cplx>& in, std::vector<cplx>& out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = in[2 * n + i];
    out[2 * n + i] = in[i];
    out[n + i] = -in[3 * n + i];
    out[3 * n + i] = -in[n + i];
  }
}

// out = (g/2c) alpha3 (z p + p z) in.
void redshift_apply(const Grid& grid, const HamiltonianConfig& cfg, const std::vector<cplx>& in,
                    std::vector<cplx>& out) {
  const std::size_t n = grid.size();
  const auto plan = FftPlan::get(n);
  std::vector<cplx> pin(in), zin(in);
  for (int c = 0; c < 4; ++c) {
    cplx* a = pin.data() + static_cast<std::size_t>(c) * n;
    cplx* b = zin.data() + static_cast<std::size_t>(c) * n;
    plan->forward(a);
    for (std::size_t k = 0; k < n; ++k) a[k] *= cfg.hbar * grid.k(k);
    plan->backward(a);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] *= grid.z(i);
      b[i] *= grid.z(i);
    }
    plan->forward(b);
    for (std::size_t k = 0; k < n; ++k) b[k] *= cfg.hbar * grid.k(k);
    plan->backward(b);
  }
  for (std::size_t i = 0; i < in.size(); ++i) pin[i] += zin[i];
  apply_alpha3(pin, out, n);
  const double s = cfg.g / (2.0 * cfg.c);
  for (cplx& x : out) x *= s;
}

void redshift_inplace(const Grid& grid, const HamiltonianConfig& cfg, std::vector<cplx>& psi,
                      double dt) {
  if (cfg.g == 0.0 || dt == 0.0) return;
  double zmax = std::max(std::abs(grid.z_min()), std::abs(grid.z_max()));
  const double pmax = kPi * cfg.hbar / grid.dz();
  const double bound = (cfg.g / cfg.c) * zmax * pmax * std::abs(dt) / cfg.hbar;
  const int sub = std::max(1, static_cast<int>(std::ceil(bound / 0.5)));
  const double tau = dt / sub;
  std::vector<cplx> term(psi.size()), next(psi.size());
  for (int s = 0; s < sub; ++s) {
    term = psi;
    const double ref = std::sqrt(kernels::serial::norm_sq(psi));
    for (int k = 1; k <= 60; ++k) {
      redshift_apply(grid, cfg, term, next);
      const cplx f = -kI * tau / (cfg.hbar * k);
      for (std::size_t i = 0; i < psi.size(); ++i) {
        term[i] = f * next[i];
        psi[i] += term[i];
      }
      if (std::sqrt(kernels::serial::norm_sq(term)) < 1e-17 * ref) break;
    }
  }
}

}  // namespace

double free_energy(double k, const HamiltonianConfig& cfg) {
  const double cp = cfg.c * cfg.hbar * k;
  const double mc2 = cfg.rest_energy();
  return std::sqrt(cp * cp + mc2 * mc2);
}

std::vector<kernels::KineticMode> kinetic_modes(const Grid& grid, const HamiltonianConfig& cfg,
                                                double dt) {
  std::vector<kernels::KineticMode> modes(grid.size());
  const double mc2 = cfg.rest_energy();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double cp = cfg.c * cfg.hbar * grid.k(k);
    const double e = std::sqrt(cp * cp + mc2 * mc2);
    const double ph = e * dt / cfg.hbar;
    const double cs = std::cos(ph), sn = std::sin(ph);
    modes[k].d_up = cplx{cs, -sn * mc2 / e};
    modes[k].d_lo = cplx{cs, sn * mc2 / e};
    modes[k].off = cplx{0.0, -sn * cp / e};
  }
  return modes;
}

SpinorField kinetic_step(const SpinorField& psi, double dt, const HamiltonianConfig& cfg) {
  std::vector<cplx> v(psi.storage());
  const std::size_t n = psi.points();
  fft_spinor(v, n, -1, Execution::serial);
  kernels::serial::kinetic_modes(v, kinetic_modes(psi.grid(), cfg, dt));
  fft_spinor(v, n, +1, Execution::serial);
  return SpinorField(psi.grid(), std::move(v));
}

std::vector<double> beta_potential(const Grid& grid, const HamiltonianConfig& cfg, double t) {
  std::vector<double> v(grid.size(), 0.0);
  const double slope = cfg.potential_slope();
  if (slope != 0.0) {
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = slope * grid.z(i);
  }
  if (cfg.mirror) {
    const auto m = mirror_profile(grid, *cfg.mirror, cfg, t);
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] += m[i];
  }
  return v;
}

SpinorField potential_step(const SpinorField& psi, double dt, const HamiltonianConfig& cfg) {
  const Grid& grid = psi.grid();
  const double slope = cfg.potential_slope();
  std::vector<cplx> phase(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    phase[i] = std::polar(1.0, -slope * grid.z(i) * dt / cfg.hbar);
  }
  SpinorField out = psi;
  kernels::serial::potential_phase(out.values(), phase);
  return out;
}

SpinorField apply_redshift_hamiltonian(const SpinorField& psi, const HamiltonianConfig& cfg) {
  std::vector<cplx> out(psi.storage().size());
  redshift_apply(psi.grid(), cfg, psi.storage(), out);
  return SpinorField(psi.grid(), std::move(out));
}

SpinorField redshift_step(const SpinorField& psi, double dt, const HamiltonianConfig& cfg) {
  std::vector<cplx> v(psi.storage());
  redshift_inplace(psi.grid(), cfg, v, dt);
  return SpinorField(psi.grid(), std::move(v));
}

StrangStepper::StrangStepper(const Grid& grid, const HamiltonianConfig& cfg, double dt,
                             Execution execution)
    : grid_(grid), cfg_(cfg), dt_(dt), exec_(execution) {
  cfg_.validate();
  time_dependent_ = cfg_.mirror && cfg_.mirror->amplitude != 0.0 && cfg_.mirror->omega != 0.0;
  if (cfg_.mirror) validate_mirror(grid_, *cfg_.mirror, cfg_);
  modes_ = kinetic_modes(grid_, cfg_, dt_);
  half_phase_.resize(grid_.size());
  if (!time_dependent_) {
    const auto v = beta_potential(grid_, cfg_, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      half_phase_[i] = std::polar(1.0, -0.5 * v[i] * dt_ / cfg_.hbar);
    }
  }
}

void StrangStepper::apply_potential(std::vector<cplx>& psi, double t) {
  if (time_dependent_) {
    const auto v = beta_potential(grid_, cfg_, t);
    for (std::size_t i = 0; i < v.size(); ++i) {
      half_phase_[i] = std::polar(1.0, -0.5 * v[i] * dt_ / cfg_.hbar);
    }
  }
  if (exec_ == Execution::parallel) {
    kernels::omp::potential_phase(psi, half_phase_);
  } else {
    kernels::serial::potential_phase(psi, half_phase_);
  }
}

void StrangStepper::apply_kinetic(std::vector<cplx>& psi) {
  const std::size_t n = grid_.size();
  fft_spinor(psi, n, -1, exec_);
  if (exec_ == Execution::parallel) {
    kernels::omp::kinetic_modes(psi, modes_);
  } else {
    kernels::serial::kinetic_modes(psi, modes_);
  }
  fft_spinor(psi, n, +1, exec_);
}

void StrangStepper::step(std::vector<cplx>& psi, double t) {
  apply_potential(psi, t);
  if (cfg_.include_redshift) redshift_inplace(grid_, cfg_, psi, 0.5 * dt_);
  apply_kinetic(psi);
  if (cfg_.include_redshift) redshift_inplace(grid_, cfg_, psi, 0.5 * dt_);
  apply_potential(psi, t + dt_);
}

namespace {

double z_theta_integral(const SpinorField& psi) {
  const std::size_t n = psi.points();
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx c = std::conj(psi.at(0, i)) * psi.at(2, i) + std::conj(psi.at(1, i)) * psi.at(3, i);
    s += psi.grid().z(i) * (-2.0 * c.imag());
  }
  return s * psi.grid().dz();
}

void record(Trajectory& traj, const SpinorField& psi, double t, double hbar) {
  traj.times.push_back(t);
  traj.series.push_row(measure(psi, hbar).row(t));
  traj.z_theta.push_back(z_theta_integral(psi));
}

}  // namespace

Trajectory propagate(const SpinorField& psi, const HamiltonianConfig& cfg, double dt,
                     std::size_t n_steps, std::size_t record_every,
                     const PropagateOptions& options) {
  cfg.validate();
  if (!(dt > 0.0)) throw ConfigError("propagate: dt must be > 0");
  if (record_every == 0) throw ConfigError("propagate: record_every must be >= 1");
  if (options.enforce_dt_bound && dt > 0.1 * cfg.zitterbewegung_time() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "propagate: dt=" << dt << " exceeds 0.1 t_zitt=" << 0.1 * cfg.zitterbewegung_time();
    throw ConfigError(msg.str());
  }
  StrangStepper stepper(psi.grid(), cfg, dt, options.execution);
  Trajectory traj;
  traj.series = TimeSeries(standard_columns());
  traj.record_dt = dt * static_cast<double>(record_every);

  std::vector<cplx> v(psi.storage());
  SpinorField current = psi;
  std::size_t n_recorded = 0;
  auto keep = [&](double t) {
    record(traj, current, t, cfg.hbar);
    if (options.observer) options.observer(t, current);
    if (options.keep_state_every != 0 && n_recorded % options.keep_state_every == 0) {
      traj.state_times.push_back(t);
      traj.states.push_back(current);
    }
    ++n_recorded;
  };
  keep(options.t0);
  for (std::size_t s = 1; s <= n_steps; ++s) {
    const double t = options.t0 + static_cast<double>(s - 1) * dt;
    stepper.step(v, t);
    const bool rec = (s % record_every == 0);
    if (rec || options.check_boundary || s == n_steps) {
      std::copy(v.begin(), v.end(), current.values().begin());
    }
    if (options.check_boundary) {
      const double leak = edge_probability(current, options.leak_cells);
      if (leak > options.leak_threshold) {
        std::ostringstream msg;
        msg << "propagate: boundary leak " << leak << " at t=" << t + dt;
        throw BoundaryLeakError(msg.str());
      }
    }
    if (rec) keep(options.t0 + static_cast<double>(s) * dt);
  }
  const double t_end = options.t0 + static_cast<double>(n_steps) * dt;
  if (traj.state_times.empty() || traj.state_times.back() != t_end) {
    traj.state_times.push_back(t_end);
    traj.states.push_back(current);
  }
  return traj;
}

SpinorField apply_free_hamiltonian(const SpinorField& psi, const HamiltonianConfig& cfg) {
  const double mc2 = cfg.rest_energy();
  return apply_mode_blocks(psi, [&](double k) {
    const double cp = cfg.c * cfg.hbar * k;
    return kernels::KineticMode{cplx{mc2, 0.0}, cplx{-mc2, 0.0}, cplx{cp, 0.0}};
  });
}

SpinorField apply_energy_projector(const SpinorField& psi, int sign, const HamiltonianConfig& cfg) {
  if (sign != 1 && sign != -1) throw ConfigError("project_energy: sign must be +1 or -1");
  const double mc2 = cfg.rest_energy();
  const double s = static_cast<double>(sign);
  return apply_mode_blocks(psi, [&](double k) {
    const double cp = cfg.c * cfg.hbar * k;
    const double e = std::sqrt(cp * cp + mc2 * mc2);
    return kernels::KineticMode{cplx{0.5 * (1.0 + s * mc2 / e), 0.0},
                                cplx{0.5 * (1.0 - s * mc2 / e), 0.0},
                                cplx{0.5 * s * cp / e, 0.0}};
  });
}

SpinorField project_energy(const SpinorField& psi, int sign, const HamiltonianConfig& cfg) {
  SpinorField out = apply_energy_projector(psi, sign, cfg);
  if (out.norm() < 1e-12) {
    throw NumericalError("project_energy: state has no component of the requested sign");
  }
  return out.normalized();
}

SpinorField charge_conjugate(const SpinorField& psi) {
  SpinorField out(psi.grid());
  for (std::size_t i = 0; i < psi.points(); ++i) {
    out.at(0, i) = std::conj(psi.at(3, i));
    out.at(1, i) = -std::conj(psi.at(2, i));
    out.at(2, i) = -std::conj(psi.at(1, i));
    out.at(3, i) = std::conj(psi.at(0, i));
  }
  return out;
}

EhrenfestResiduals ehrenfest_residuals(const Trajectory& traj, const HamiltonianConfig& cfg) {
  const std::size_t m = traj.times.size();
  if (m < 3) throw ConfigError("ehrenfest_residuals: need at least 3 samples");
  const auto z = traj.series.column("z");
  const auto p = traj.series.column("p3");
  const auto a3 = traj.series.column("alpha3");
  const auto b = traj.series.column("beta");
  const double h = traj.record_dt;
  const double mg = cfg.potential_slope();
  EhrenfestResiduals r;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const double dz = (z[k + 1] - z[k - 1]) / (2.0 * h);
    const double dp = (p[k + 1] - p[k - 1]) / (2.0 * h);
    r.position = std::max(r.position, std::abs(dz - cfg.c * a3[k]));
    r.momentum = std::max(r.momentum, std::abs(dp + mg * b[k]));
  }
  return r;
}

double gamma5_rate(const SpinorField& psi, const HamiltonianConfig& cfg) {
  const Observables o = measure(psi, cfg.hbar);
  const double g = cfg.potential == PotentialMode::conservative ? cfg.g : 0.0;
  return 2.0 * cfg.mass / cfg.hbar * (cfg.c * cfg.c * o.theta + g * z_theta_integral(psi));
}

Gamma5Diagnostics gamma5_diagnostics(const Trajectory& traj, const HamiltonianConfig& cfg) {
  const std::size_t m = traj.times.size();
  if (m < 3) throw ConfigError("gamma5_diagnostics: need at least 3 samples");
  const auto g5 = traj.series.column("gamma5");
  const auto th = traj.series.column("Theta");
  const auto yt = traj.series.column("theta_YT");
  const double g = cfg.potential == PotentialMode::conservative ? cfg.g : 0.0;
  const double h = traj.record_dt;
  Gamma5Diagnostics d;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const double rate = (g5[k + 1] - g5[k - 1]) / (2.0 * h);
    const double pred =
        2.0 * cfg.mass / cfg.hbar * (cfg.c * cfg.c * th[k] + g * traj.z_theta[k]);
    d.t.push_back(traj.times[k]);
    d.rate.push_back(rate);
    d.predicted.push_back(pred);
    d.theta_yt.push_back(yt[k]);
    d.max_residual = std::max(d.max_residual, std::abs(rate - pred));
  }
  return d;
}

Series acceleration_series(const Trajectory& traj) {
  const std::size_t m = traj.times.size();
  if (m < 5) throw ConfigError("acceleration_series: need at least 5 samples");
  const auto z = traj.series.column("z");
  const double h = traj.record_dt;
  Series s;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    s.t.push_back(traj.times[k]);
    s.value.push_back((z[k + 1] - 2.0 * z[k] + z[k - 1]) / (h * h));
  }
  return s;
}

}  // namespace dfeg
