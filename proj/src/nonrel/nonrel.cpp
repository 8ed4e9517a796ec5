#include "dfeg/nonrel/nonrel.hpp"

#include <cmath>
#include <sstream>

#include "dfeg/core/density.hpp"
#include "dfeg/core/fft.hpp"
#include "dfeg/core/packet.hpp"
#include "dfeg/dynamics/dirac.hpp"
#include "dfeg/qbounce/mirror.hpp"

namespace dfeg {

ScalarField::ScalarField(Grid grid) : grid_(std::move(grid)), values_(grid_.size()) {}

ScalarField::ScalarField(Grid grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw DimensionError("ScalarField: size mismatch");
}

double ScalarField::norm() const {
  double s = 0.0;
  for (const cplx& v : values_) s += std::norm(v);
  return s * grid_.dz();
}

ScalarField ScalarField::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw NumericalError("ScalarField: zero norm");
  ScalarField out = *this;
  const double f = 1.0 / std::sqrt(n);
  for (cplx& v : out.values_) v *= f;
  return out;
}

cplx ScalarField::inner(const ScalarField& other) const {
  require_same_grid(grid_, other.grid_);
  cplx s{};
  for (std::size_t i = 0; i < values_.size(); ++i) s += std::conj(values_[i]) * other.values_[i];
  return s * grid_.dz();
}

bool ScalarField::all_finite() const {
  for (const cplx& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

ScalarField make_scalar_gaussian(const Grid& grid, double z0, double p0, double width,
                                 double hbar) {
  const SpinorField s = make_gaussian_packet(grid, z0, p0, width, hbar, 0);
  const auto c = s.component(0);
  return ScalarField(grid, std::vector<cplx>(c.begin(), c.end()));
}

std::vector<double> schrodinger_potential(const Grid& grid, const HamiltonianConfig& cfg,
                                          const SchrodingerOptions& options) {
  const std::size_t n = grid.size();
  std::vector<double> v(n, 0.0);
  if (options.potential == PotentialMode::conservative) {
    for (std::size_t i = 0; i < n; ++i) v[i] = cfg.mass * cfg.g * grid.z(i);
  }
  if (options.wall) {
    if (options.wall->model != MirrorModel::mass_step) {
      throw ConfigError("schrodinger: the wall must be a mass_step mirror");
    }
    validate_mirror(grid, *options.wall, cfg);
    const auto w = mirror_profile(grid, *options.wall, cfg, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i] += w[i];
  }
  if (options.delta_prime) {
    const auto& d = *options.delta_prime;
    const double w = d.reg_width > 0.0 ? d.reg_width : 2.0 * grid.dz();
    if (w < 2.0 * grid.dz() * (1.0 - 1e-12)) throw ConfigError("delta_prime: reg_width < 2 dz");
    const double weight = -cfg.hbar * cfg.hbar / (4.0 * cfg.mass) * d.weight_scale;
    const double norm = 1.0 / (std::sqrt(2.0 * kPi) * w);
    auto gauss = [&](double x) { return norm * std::exp(-0.5 * x * x / (w * w)); };
    for (std::size_t i = 0; i < n; ++i) {
      const double x = grid.z(i) - d.z_mirror;
      v[i] += weight * (gauss(x + w) - gauss(x - w)) / (2.0 * w);
    }
  }
  return v;
}

const std::vector<std::string>& scalar_columns() {
  static const std::vector<std::string> cols = {"t", "z", "p3", "width", "norm"};
  return cols;
}

namespace {

std::vector<double> scalar_row(const ScalarField& phi, double t, double hbar,
                               std::vector<cplx>& scratch) {
  const Grid& g = phi.grid();
  const std::size_t n = g.size();
  double nrm = 0.0, z = 0.0, z2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::norm(phi.values()[i]);
    nrm += d;
    z += d * g.z(i);
    z2 += d * g.z(i) * g.z(i);
  }
  scratch = phi.values();
  FftPlan::get(n)->forward(scratch.data());
  double pk = 0.0, pn = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = std::norm(scratch[k]);
    pk += d * hbar * g.k(k);
    pn += d;
  }
  z /= nrm;
  z2 /= nrm;
  return {t, z, pk / pn, std::sqrt(std::max(0.0, z2 - z * z)), nrm * g.dz()};
}

double scalar_edge_probability(const ScalarField& phi, std::size_t cells) {
  const std::size_t n = phi.grid().size();
  double p = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    p += std::norm(phi.values()[i]) + std::norm(phi.values()[n - 1 - i]);
  }
  return p * phi.grid().dz();
}

}  // namespace

ScalarTrajectory schrodinger_propagate(const ScalarField& phi, const HamiltonianConfig& cfg,
                                       double dt, std::size_t n_steps, std::size_t record_every,
                                       const SchrodingerOptions& options) {
  cfg.validate();
  if (!(dt > 0.0)) throw ConfigError("schrodinger_propagate: dt must be > 0");
  if (record_every == 0) throw ConfigError("schrodinger_propagate: record_every must be >= 1");
  const Grid& g = phi.grid();
  const std::size_t n = g.size();
  const auto v = schrodinger_potential(g, cfg, options);
  std::vector<cplx> half(n), kin(n);
  for (std::size_t i = 0; i < n; ++i) half[i] = std::polar(1.0, -0.5 * v[i] * dt / cfg.hbar);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = g.k(k);
    kin[k] = std::polar(1.0, -cfg.hbar * kk * kk * dt / (2.0 * cfg.mass));
  }
  const auto plan = FftPlan::get(n);

  ScalarTrajectory traj{TimeSeries(scalar_columns()), {}, {}, phi};
  ScalarField& cur = traj.final_state;
  std::vector<cplx> scratch;
  auto record = [&](double t) {
    traj.series.push_row(scalar_row(cur, t, cfg.hbar, scratch));
    traj.auto_t.push_back(t);
    traj.autocorrelation.push_back(phi.inner(cur));
  };
  record(0.0);
  auto& x = cur.values();
  for (std::size_t s = 1; s <= n_steps; ++s) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= half[i];
    plan->forward(x.data());
    for (std::size_t k = 0; k < n; ++k) x[k] *= kin[k];
    plan->backward(x.data());
    for (std::size_t i = 0; i < n; ++i) x[i] *= half[i];
    if (options.check_boundary) {
      const double leak = scalar_edge_probability(cur, 5);
      if (leak > options.leak_threshold) {
        std::ostringstream msg;
        msg << "schrodinger_propagate: boundary leak " << leak << " at t=" << s * dt;
        throw BoundaryLeakError(msg.str());
      }
    }
    if (s % record_every == 0) record(static_cast<double>(s) * dt);
  }
  return traj;
}

namespace {

// X <- U X U^dag with U = F^-1 diag(phase) F acting on columns.
void conjugate_kinetic(Eigen::MatrixXcd& x, const std::vector<cplx>& phase) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto plan = FftPlan::get(n);
  auto left = [&](Eigen::MatrixXcd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      cplx* col = m.data() + j * m.rows();
      plan->forward(col);
      for (std::size_t k = 0; k < n; ++k) col[k] *= phase[k];
      plan->backward(col);
    }
  };
  left(x);
  Eigen::MatrixXcd t = x.adjoint();
  left(t);
  x = t.adjoint();
}

std::vector<cplx> kinetic_phase(const Grid& g, const HamiltonianConfig& cfg, double tau) {
  std::vector<cplx> p(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double kk = g.k(k);
    p[k] = std::polar(1.0, -cfg.hbar * kk * kk * tau / (2.0 * cfg.mass));
  }
  return p;
}

Eigen::MatrixXcd diagonal_flow(const Grid& g, const HamiltonianConfig& cfg,
                               const DfegParams& params, double h, NonrelMode mode) {
  const std::size_t n = g.size();
  const auto d = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd e(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double zi = g.z(static_cast<std::size_t>(i));
      const double zj = g.z(static_cast<std::size_t>(j));
      if (mode == NonrelMode::full) {
        const cplx uu = std::polar(1.0, -(zi - zj) / (params.x0 * params.sigma));
        e(i, j) = params.dissipator_enabled ? std::exp(h * params.gamma_rate * (uu - 1.0)) : 1.0;
      } else {
        e(i, j) = std::polar(1.0, -h * cfg.mass * cfg.g * (zi - zj) / cfg.hbar);
      }
    }
  }
  return e;
}

void check_dense(const Eigen::MatrixXcd& rho, const Grid& grid) {
  if (grid.size() > 256) throw ConfigError("nonrel dense: N must be <= 256");
  if (rho.rows() != static_cast<Eigen::Index>(grid.size()) || rho.cols() != rho.rows()) {
    throw DimensionError("nonrel dense: rho must be N x N");
  }
}

}  // namespace

Eigen::MatrixXcd nonrel_dfeg_step(const Eigen::MatrixXcd& rho, const Grid& grid,
                                  const HamiltonianConfig& cfg, const DfegParams& params,
                                  double dt, NonrelMode mode) {
  check_dense(rho, grid);
  params.validate();
  Eigen::MatrixXcd out = rho;
  const auto half = kinetic_phase(grid, cfg, 0.5 * dt);
  conjugate_kinetic(out, half);
  out.array() *= diagonal_flow(grid, cfg, params, dt, mode).array();
  conjugate_kinetic(out, half);
  return 0.5 * (out + out.adjoint());
}

Eigen::MatrixXcd nonrel_dissipator(const Eigen::MatrixXcd& rho, const Grid& grid,
                                   const HamiltonianConfig& cfg, const DfegParams& params) {
  check_dense(rho, grid);
  (void)cfg;
  const auto d = rho.rows();
  Eigen::MatrixXcd out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double dz = grid.z(static_cast<std::size_t>(i)) - grid.z(static_cast<std::size_t>(j));
      const cplx uu = std::polar(1.0, -dz / (params.x0 * params.sigma));
      out(i, j) = params.gamma_rate * (uu - 1.0) * rho(i, j);
    }
  }
  return out;
}

NonrelDenseRun evolve_nonrel_dense(const Eigen::MatrixXcd& rho0, const Grid& grid,
                                   const HamiltonianConfig& cfg, const DfegParams& params,
                                   double dt, std::size_t n_steps, NonrelMode mode,
                                   double max_substep) {
  check_dense(rho0, grid);
  params.validate();
  if (!(dt > 0.0) || !(max_substep > 0.0)) throw ConfigError("nonrel dense: dt must be > 0");
  const auto m = static_cast<std::size_t>(std::ceil(dt / max_substep - 1e-12));
  const double h = dt / static_cast<double>(m);
  const auto half = kinetic_phase(grid, cfg, 0.5 * h);
  const Eigen::MatrixXcd flow = diagonal_flow(grid, cfg, params, h, mode);
  const std::size_t n = grid.size();

  NonrelDenseRun run;
  run.series = TimeSeries({"t", "z", "p3", "purity", "trace"});
  run.x0 = params.x0;
  Eigen::MatrixXcd rho = rho0;
  std::vector<cplx> col(n);
  const auto plan = FftPlan::get(n);
  auto record = [&](double t) {
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z += grid.z(i) * rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    // Tr[P rho] = sum_k hbar k (F rho F^dag)_kk / n.
    Eigen::MatrixXcd b = rho;
    for (Eigen::Index j = 0; j < b.cols(); ++j) plan->forward(b.data() + j * b.rows());
    Eigen::MatrixXcd c = b.adjoint();
    for (Eigen::Index j = 0; j < c.cols(); ++j) plan->forward(c.data() + j * c.rows());
    double p = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      p += cfg.hbar * grid.k(k) *
           c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real() /
           static_cast<double>(n);
    }
    const double tr = rho.trace().real();
    run.series.push_row({t, z / tr, p / tr, rho.squaredNorm(), tr});
  };
  record(0.0);
  for (std::size_t s = 1; s <= n_steps; ++s) {
    for (std::size_t k = 0; k < m; ++k) {
      conjugate_kinetic(rho, half);
      rho.array() *= flow.array();
      conjugate_kinetic(rho, half);
    }
    Eigen::MatrixXcd sym = 0.5 * (rho + rho.adjoint());
    rho.swap(sym);
    record(static_cast<double>(s) * dt);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  run.min_eigenvalue = es.eigenvalues().minCoeff();
  run.final_state = rho;
  return run;
}

std::array<double, 3> fw_spin_orbit_vector(const std::array<double, 3>& a,
                                           const std::array<double, 3>& p) {
  return {a[1] * p[2] - a[2] * p[1], a[2] * p[0] - a[0] * p[2], a[0] * p[1] - a[1] * p[0]};
}

std::string to_string(LimitScenario s) {
  switch (s) {
    case LimitScenario::free_fall: return "free_fall";
    case LimitScenario::dfeg: return "dfeg";
    case LimitScenario::qbounce_static: return "qbounce_static";
  }
  return "unknown";
}

LimitScenario limit_scenario_from_string(const std::string& s) {
  if (s == "free_fall") return LimitScenario::free_fall;
  if (s == "dfeg") return LimitScenario::dfeg;
  if (s == "qbounce_static") return LimitScenario::qbounce_static;
  throw ConfigError("unknown scenario '" + s + "' (free_fall, dfeg, qbounce_static)");
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("log_log_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string LimitTable::to_csv() const {
  std::ostringstream os;
  os << "c,scenario,rms_error,fitted_slope\n";
  for (const auto& r : rows) {
    os << format_double(r.c) << ',' << to_string(r.scenario) << ',' << format_double(r.rms_error)
       << ',' << format_double(fitted_slope) << '\n';
  }
  return os.str();
}

namespace {

double rms_difference(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw DimensionError("rms_difference: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

LimitRow limit_row(double c, LimitScenario scenario, const LimitOptions& o) {
  HamiltonianConfig cfg;
  cfg.c = c;
  cfg.g = o.g;
  const Grid grid(o.n_points, o.z_min, o.z_max);
  const double dt_max = o.dt_fraction * cfg.zitterbewegung_time();
  const auto per_record = static_cast<std::size_t>(std::ceil(o.record_dt / dt_max - 1e-9));
  const double dt = o.record_dt / static_cast<double>(per_record);
  const auto n_records = static_cast<std::size_t>(std::llround(o.t_end / o.record_dt));
  const SpinorField psi = project_energy(make_gaussian_packet(grid, o.z0, 0.0, o.width), 1, cfg);
  const ScalarField phi = make_scalar_gaussian(grid, o.z0, 0.0, o.width);

  std::vector<double> z_dirac, z_schr;
  if (scenario == LimitScenario::dfeg) {
    const DfegParams params = DfegParams::make(o.sigma, cfg);
    DenseOptions opts;
    opts.integrator = DenseIntegrator::strang_exact;
    const DenseRun d = evolve_dense(DensityMatrix::from_pure(psi), cfg, params, o.record_dt,
                                    n_records, LindbladMode::full, opts);
    z_dirac = d.series.column("z");
    Eigen::VectorXcd v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v(static_cast<Eigen::Index>(i)) = phi.values()[i];
    Eigen::MatrixXcd rho = v * v.adjoint();
    rho /= rho.trace().real();
    const NonrelDenseRun s = evolve_nonrel_dense(rho, grid, cfg, params, o.record_dt, n_records,
                                                 NonrelMode::full,
                                                 std::min(0.01, o.record_dt));
    z_schr = s.series.column("z");
  } else {
    HamiltonianConfig dcfg = cfg;
    SchrodingerOptions sopts;
    if (scenario == LimitScenario::qbounce_static) {
      MirrorConfig m;
      m.v0 = o.mirror_v0 * cfg.rest_energy();
      m.z_mirror = o.mirror_z;
      m.reg_width = o.mirror_reg_width;
      dcfg.mirror = m;
      sopts.wall = m;
    }
    PropagateOptions popts;
    const Trajectory t = propagate(psi, dcfg, dt, per_record * n_records, per_record, popts);
    z_dirac = t.series.column("z");
    const ScalarTrajectory s =
        schrodinger_propagate(phi, cfg, dt, per_record * n_records, per_record, sopts);
    z_schr = s.series.column("z");
  }
  LimitRow row;
  row.c = c;
  row.scenario = scenario;
  row.rms_error = rms_difference(z_dirac, z_schr);
  double lo = z_schr.front();
  for (double z : z_schr) lo = std::min(lo, z);
  row.fall_distance = z_schr.front() - lo;
  return row;
}

}  // namespace

LimitTable limit_convergence_study(const std::vector<double>& c_list, LimitScenario scenario,
                                   const LimitOptions& options) {
  LimitTable table;
  std::vector<double> cs, errs;
  for (double c : c_list) {
    if (!(c > 0.0)) throw ConfigError("limit_convergence_study: c must be positive");
    table.rows.push_back(limit_row(c, scenario, options));
    if (table.rows.back().rms_error > 0.0) {
      cs.push_back(c);
      errs.push_back(table.rows.back().rms_error);
    }
  }
  table.fitted_slope = cs.size() >= 2 ? log_log_slope(cs, errs) : 0.0;
  return table;
}

}  // namespace dfeg
