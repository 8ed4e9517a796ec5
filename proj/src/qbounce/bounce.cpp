#include "dfeg/qbounce/bounce.hpp"

#include <algorithm>
#include <cmath>

#include "dfeg/core/observables.hpp"
#include "dfeg/core/packet.hpp"
#include "dfeg/qbounce/mirror.hpp"

namespace dfeg {

namespace {

// J3 from the local 4x4 block r(a, b) = psi_a conj(psi_b).
template <class Entry>
double local_current(Entry r) {
  return 2.0 * (r(2, 0).real() - r(3, 1).real());
}

template <class Entry>
double local_density(Entry r) {
  return (r(0, 0) + r(1, 1) + r(2, 2) + r(3, 3)).real();
}

}  // namespace

std::vector<double> probability_current(const SpinorField& psi) {
  const std::size_t n = psi.grid().size();
  std::vector<double> j(n);
  for (std::size_t i = 0; i < n; ++i) {
    j[i] = local_current([&](int a, int b) { return psi.at(a, i) * std::conj(psi.at(b, i)); });
  }
  return j;
}

BoundarySample boundary_sample(const SpinorField& psi, const MirrorConfig& mirror, double t) {
  const std::size_t n = psi.grid().size();
  BoundarySample s;
  s.mirror_position = mirror.position(t);
  const std::size_t im = psi.grid().nearest_index(s.mirror_position);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = [&](int a, int b) { return psi.at(a, i) * std::conj(psi.at(b, i)); };
    peak = std::max(peak, local_density(r));
    const double j = local_current(r);
    s.peak_flux = std::max(s.peak_flux, std::abs(j));
    if (i == im) {
      s.j3_at_mirror = j;
      s.boundary_amplitude = local_density(r);
    }
  }
  s.boundary_amplitude = peak > 0.0 ? std::sqrt(s.boundary_amplitude / peak) : 0.0;
  return s;
}

BoundarySample boundary_sample(const DensityMatrix& rho, const MirrorConfig& mirror, double t) {
  const Grid& grid = rho.grid();
  const std::size_t n = grid.size();
  const auto& m = rho.values();
  const double inv_dz = 1.0 / grid.dz();
  BoundarySample s;
  s.mirror_position = mirror.position(t);
  const std::size_t im = grid.nearest_index(s.mirror_position);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = [&](int a, int b) {
      return m(static_cast<Eigen::Index>(a * n + i), static_cast<Eigen::Index>(b * n + i)) * inv_dz;
    };
    peak = std::max(peak, local_density(r));
    const double j = local_current(r);
    s.peak_flux = std::max(s.peak_flux, std::abs(j));
    if (i == im) {
      s.j3_at_mirror = j;
      s.boundary_amplitude = local_density(r);
    }
  }
  s.boundary_amplitude = peak > 0.0 ? std::sqrt(s.boundary_amplitude / peak) : 0.0;
  return s;
}

double probability_below(const SpinorField& psi, double z_cut) {
  const Grid& grid = psi.grid();
  double p = 0.0;
  for (int c = 0; c < 4; ++c) {
    for (std::size_t i = 0; i < grid.size() && grid.z(i) <= z_cut; ++i) {
      p += std::norm(psi.at(c, i));
    }
  }
  return p * grid.dz();
}

double probability_below(const DensityMatrix& rho, double z_cut) {
  const Grid& grid = rho.grid();
  const std::size_t n = grid.size();
  double p = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t i = 0; i < n && grid.z(i) <= z_cut; ++i) {
      const auto k = static_cast<Eigen::Index>(c * n + i);
      p += rho.values()(k, k).real();
    }
  }
  return p;
}

const std::vector<std::string>& bounce_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = standard_columns();
    for (const char* extra : {"mirror_position", "boundary_amplitude", "J3_at_mirror"}) {
      c.emplace_back(extra);
    }
    return c;
  }();
  return cols;
}

std::vector<double> turning_points(const std::vector<double>& t, const std::vector<double>& z,
                                   double min_excursion) {
  std::vector<double> out;
  if (z.size() < 3) return out;
  // Track the running extremum in the current direction; a reversal by more
  // than min_excursion confirms it as a turning point.
  int dir = 0;
  std::size_t ext = 0;
  for (std::size_t k = 1; k < z.size(); ++k) {
    if (dir == 0) {
      if (std::abs(z[k] - z[0]) > min_excursion) {
        dir = z[k] > z[0] ? 1 : -1;
        ext = k;
      } else {
        continue;
      }
    }
    if ((dir > 0 && z[k] > z[ext]) || (dir < 0 && z[k] < z[ext])) {
      ext = k;
    } else if (std::abs(z[k] - z[ext]) > min_excursion) {
      out.push_back(t[ext]);
      dir = -dir;
      ext = k;
    }
  }
  return out;
}

namespace {

void finish(BounceRun& run, std::vector<BoundarySample>& samples) {
  const auto& base = run.series;
  TimeSeries out(bounce_columns());
  for (std::size_t r = 0; r < base.rows(); ++r) {
    std::vector<double> row = base.row(r);
    row.push_back(samples[r].mirror_position);
    row.push_back(samples[r].boundary_amplitude);
    row.push_back(samples[r].j3_at_mirror);
    out.push_row(row);
    run.peak_flux = std::max(run.peak_flux, samples[r].peak_flux);
  }
  run.series = std::move(out);
  const auto t = run.series.column("t");
  const auto z = run.series.column("z");
  const auto s3 = run.series.column("S3");
  const auto [zmin, zmax] = std::minmax_element(z.begin(), z.end());
  run.turning_times = turning_points(t, z, 0.02 * (*zmax - *zmin));
  for (double v : s3) run.max_s3_drift = std::max(run.max_s3_drift, std::abs(v - s3.front()));
}

}  // namespace

BounceRun qbounce_run(const SpinorField& psi0, const HamiltonianConfig& cfg, double dt,
                      std::size_t n_steps, std::size_t record_every,
                      const PropagateOptions& options) {
  if (!cfg.mirror) throw ConfigError("qbounce_run: cfg.mirror is required");
  validate_mirror(psi0.grid(), *cfg.mirror, cfg);
  BounceRun run;
  std::vector<BoundarySample> samples;
  PropagateOptions opts = options;
  opts.observer = [&](double t, const SpinorField& psi) {
    samples.push_back(boundary_sample(psi, *cfg.mirror, t));
    run.auto_t.push_back(t);
    run.autocorrelation.push_back(psi0.inner(psi));
    if (options.observer) options.observer(t, psi);
  };
  Trajectory traj = propagate(psi0, cfg, dt, n_steps, record_every, opts);
  run.series = std::move(traj.series);
  run.final_state = traj.final_state();
  run.final_below_mirror = probability_below(*run.final_state, cfg.mirror->position(traj.times.back()));
  finish(run, samples);
  return run;
}

BounceRun qbounce_run(const DensityMatrix& rho0, const HamiltonianConfig& cfg,
                      const DfegParams& params, LindbladMode mode, double dt,
                      std::size_t n_steps, const DenseOptions& options) {
  if (!cfg.mirror) throw ConfigError("qbounce_run: cfg.mirror is required");
  BounceRun run;
  std::vector<BoundarySample> samples;
  DenseOptions opts = options;
  double t_last = 0.0;
  opts.observer = [&](double t, const DensityMatrix& rho) {
    samples.push_back(boundary_sample(rho, *cfg.mirror, t));
    t_last = t;
    if (options.observer) options.observer(t, rho);
  };
  DenseRun dense = evolve_dense(rho0, cfg, params, dt, n_steps, mode, opts);
  run.series = std::move(dense.series);
  run.final_density = dense.final_state();
  run.final_below_mirror = probability_below(*run.final_density, cfg.mirror->position(t_last));
  finish(run, samples);
  return run;
}

CurrentCheck surface_current_check(const BounceRun& run) {
  CurrentCheck c;
  for (double j : run.series.column("J3_at_mirror")) {
    c.max_at_mirror = std::max(c.max_at_mirror, std::abs(j));
  }
  c.peak_flux = run.peak_flux;
  c.ratio = c.peak_flux > 0.0 ? c.max_at_mirror / c.peak_flux : 0.0;
  return c;
}

std::vector<DirichletPoint> dirichlet_limit_check(const HamiltonianConfig& cfg,
                                                  const std::vector<double>& v0_over_mc2,
                                                  const ReflectionScenario& sc) {
  const Grid grid(sc.n_points, sc.z_min, sc.z_max);
  const SpinorField psi =
      project_energy(make_gaussian_packet(grid, sc.z0, sc.p0, sc.width, cfg.hbar), 1, cfg);
  const auto n_steps = static_cast<std::size_t>(std::llround(sc.t_end / sc.dt));
  std::vector<DirichletPoint> out;
  for (double ratio : v0_over_mc2) {
    HamiltonianConfig c = cfg;
    MirrorConfig m;
    m.model = MirrorModel::mass_step;
    m.v0 = ratio * cfg.rest_energy();
    m.z_mirror = 0.0;
    c.mirror = m;
    const BounceRun run = qbounce_run(psi, c, sc.dt, n_steps, sc.record_every);
    DirichletPoint p;
    p.v0 = ratio;
    for (double a : run.series.column("boundary_amplitude")) {
      p.max_boundary_amplitude = std::max(p.max_boundary_amplitude, a);
    }
    p.max_j3_ratio = surface_current_check(run).ratio;
    p.transmitted = run.final_below_mirror;
    out.push_back(p);
  }
  return out;
}

std::vector<SpectrumPeak> autocorrelation_peaks(const std::vector<double>& t,
                                                const std::vector<cplx>& a, double rest_energy,
                                                double hbar, double e_min, double e_max,
                                                double rel_height) {
  if (t.size() != a.size() || t.size() < 8) {
    throw ConfigError("autocorrelation_peaks: need >= 8 matching samples");
  }
  const std::size_t n = t.size();
  const double span = t.back() - t.front();
  // Blackman window (sidelobes near -58 dB); the energy grid oversamples the
  // 2 pi hbar/T resolution 16 times.
  std::vector<cplx> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = (t[k] - t.front()) / span;
    const double win = 0.42 - 0.5 * std::cos(2.0 * kPi * x) + 0.08 * std::cos(4.0 * kPi * x);
    w[k] = a[k] * std::polar(win, rest_energy * t[k] / hbar);
  }
  const double de = 2.0 * kPi * hbar / span / 16.0;
  const auto m = static_cast<std::size_t>(std::ceil((e_max - e_min) / de)) + 1;
  std::vector<double> s(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double e = e_min + de * static_cast<double>(j);
    cplx acc{};
    for (std::size_t k = 0; k < n; ++k) acc += w[k] * std::polar(1.0, e * t[k] / hbar);
    s[j] = std::abs(acc);
  }
  const double top = *std::max_element(s.begin(), s.end());
  std::vector<SpectrumPeak> peaks;
  for (std::size_t j = 1; j + 1 < m; ++j) {
    if (s[j] > s[j - 1] && s[j] >= s[j + 1] && s[j] >= rel_height * top) {
      const double den = s[j - 1] - 2.0 * s[j] + s[j + 1];
      const double off = den != 0.0 ? 0.5 * (s[j - 1] - s[j + 1]) / den : 0.0;
      peaks.push_back({e_min + de * (static_cast<double>(j) + off), s[j]});
    }
  }
  return peaks;
}

}  // namespace dfeg
