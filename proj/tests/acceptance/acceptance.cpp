// Primary acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dfeg/core/density.hpp"
#include "dfeg/core/packet.hpp"
#include "dfeg/core/rng.hpp"
#include "dfeg/dynamics/dirac.hpp"
#include "dfeg/lindblad/dfeg.hpp"
#include "dfeg/nonrel/nonrel.hpp"
#include "dfeg/qbounce/bounce.hpp"
#include "dfeg/spectral/bessel.hpp"
#include "dfeg/spectral/levels.hpp"
#include "oracles.hpp"

using namespace dfeg;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
  void note(const std::string& what) { detail << (detail.tellp() > 0 ? "; " : "") << what; }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double column_drift(const TimeSeries& s, const char* col) {
  const auto v = s.column(col);
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x - v.front()));
  return d;
}

// Runs shared between criteria.
struct FreeFall {
  Trajectory matter, antimatter, mixed;
  double seconds = 0.0;
};

FreeFall free_fall_preset() {
  // paper-fig1: g = 0.5, natural units, z_init = 2 (mixed 2.38), width 0.01.
  HamiltonianConfig cfg;
  cfg.g = 0.5;
  const Grid grid(8192, -10.0, 30.0);
  const auto t0 = std::chrono::steady_clock::now();
  const SpinorField seed = make_gaussian_packet(grid, 2.0, 0.0, 0.01);
  const SpinorField matter = project_energy(seed, 1, cfg);
  FreeFall f{propagate(matter, cfg, 0.01, 1000, 1),
             propagate(charge_conjugate(matter), cfg, 0.01, 1000, 1),
             propagate(make_gaussian_packet(grid, 2.38, 0.0, 0.01), cfg, 0.01, 1000, 1), 0.0};
  f.seconds = seconds_since(t0);
  return f;
}

std::vector<double> s3_drifts;

void beta_decay(const FreeFall& f, Outcome& o) {
  const HamiltonianConfig cfg;
  const double t_start = 5.0 * cfg.zitterbewegung_time();
  for (const auto* t : {&f.matter, &f.antimatter}) {
    double worst = 0.0;
    for (std::size_t k = 0; k < t->times.size(); ++k) {
      if (t->times[k] >= t_start - 1e-12) worst = std::max(worst, std::abs(t->series.at(k, "beta")));
    }
    o.require(worst < 0.2, std::string(t == &f.matter ? "matter" : "antimatter") +
                               " max|beta| on [5 t_zitt, 10] = " + sci(worst));
  }
  o.require(f.seconds < 60.0, "runtime " + sci(f.seconds) + " s");
}

void equivalence(const FreeFall& f, Outcome& o) {
  const double g = 0.5;
  const auto zm = f.matter.series.column("z");
  const auto za = f.antimatter.series.column("z");
  const double fall = std::abs(zm.front() - zm.back());
  double diff = 0.0;
  for (std::size_t k = 0; k < zm.size(); ++k) {
    if (f.matter.times[k] >= 2.0) diff = std::max(diff, std::abs(zm[k] - za[k]));
  }
  o.require(diff < 0.02 * fall, "max|z_m - z_a| / fall = " + sci(diff / fall));

  for (const auto* t : {&f.matter, &f.antimatter}) {
    const Series a = acceleration_series(*t);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < a.t.size(); ++k) {
      if (a.t[k] >= 2.0) {
        sum += a.value[k];
        ++n;
      }
    }
    const double mean = sum / static_cast<double>(n);
    o.require(std::abs(mean + g) < 0.05 * g, std::string(t == &f.matter ? "matter" : "antimatter") +
                                                 " mean a3 on [2, 10] = " + sci(mean));
  }

  const Series a = acceleration_series(f.mixed);
  const double t_limit = 4.0 * HamiltonianConfig{}.zitterbewegung_time();
  int changes = 0;
  for (std::size_t k = 1; k < a.t.size() && a.t[k] < t_limit; ++k) {
    if ((a.value[k] > 0.0) != (a.value[k - 1] > 0.0)) ++changes;
  }
  o.require(changes >= 1, "mixed a3 sign changes before 4 t_zitt = " + std::to_string(changes));
}

void ehrenfest(Outcome& o) {
  HamiltonianConfig cfg;
  cfg.g = 0.5;
  const Grid grid(2048, -10.0, 14.0);
  const SpinorField psi = project_energy(make_gaussian_packet(grid, 2.0, 0.0, 0.5), 1, cfg);
  const Trajectory fine = propagate(psi, cfg, 1e-3, 1000, 1);
  const Trajectory coarse = propagate(psi, cfg, 2e-3, 500, 1);
  s3_drifts.push_back(column_drift(fine.series, "S3"));
  const EhrenfestResiduals rf = ehrenfest_residuals(fine, cfg);
  const EhrenfestResiduals rc = ehrenfest_residuals(coarse, cfg);
  o.require(rf.position < 1e-4, "position residual " + sci(rf.position));
  o.require(rf.momentum < 1e-4, "momentum residual " + sci(rf.momentum));
  const double qp = rc.position / rf.position, qm = rc.momentum / rf.momentum;
  o.require(qp >= 3.5 && qp <= 4.5, "position ratio " + sci(qp));
  o.require(qm >= 3.5 && qm <= 4.5, "momentum ratio " + sci(qm));
}

DensityMatrix random_mixed_state(const Grid& grid, std::uint64_t seed) {
  CounterRng rng(seed, 1);
  std::vector<SpinorField> states;
  std::vector<double> w;
  for (int k = 0; k < 3; ++k) {
    SpinorField s(grid);
    for (cplx& v : s.values()) v = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    states.push_back(s.normalized());
    w.push_back(rng.uniform());
  }
  const double total = w[0] + w[1] + w[2];
  for (double& x : w) x /= total;
  return DensityMatrix::mixture(states, w);
}

void purity_law(Outcome& o) {
  HamiltonianConfig cfg;
  cfg.g = 0.5;
  const Grid grid(64, -10.0, 10.0);
  const SpinorField psi = project_energy(make_gaussian_packet(grid, 0.0, 0.0, 1.0), 1, cfg);
  const DensityMatrix rho0 = DensityMatrix::from_pure(psi);

  double worst_rel = 0.0;
  for (const DensityMatrix& r : {rho0, random_mixed_state(grid, 3)}) {
    const PurityRate pr = purity_rate_check(r, DfegParams::make(100.0, cfg), cfg);
    worst_rel = std::max(worst_rel, std::abs(pr.numeric - pr.formula) / std::abs(pr.formula));
  }
  o.require(worst_rel < 1e-6, "rate rel error " + sci(worst_rel));

  DenseOptions opts;
  opts.integrator = DenseIntegrator::strang_exact;
  std::vector<double> loss;
  for (double sigma : {50.0, 100.0, 200.0}) {
    const DenseRun run = evolve_dense(rho0, cfg, DfegParams::make(sigma, cfg), 0.1, 20,
                                      LindbladMode::full, opts);
    s3_drifts.push_back(column_drift(run.series, "S3"));
    loss.push_back(1.0 - purity(run.final_state()));
  }
  const double r1 = loss[0] / loss[1] / 2.0, r2 = loss[1] / loss[2] / 2.0;
  o.require(std::abs(r1 - 1.0) < 0.1 && std::abs(r2 - 1.0) < 0.1,
            "(1-P) sigma-scaling ratios " + sci(r1) + ", " + sci(r2));

  double min_witness = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < 100; ++s) {
    const PurityRate pr = purity_rate_check(random_mixed_state(grid, 100 + s),
                                            DfegParams::make(100.0, cfg), cfg);
    min_witness = std::min(min_witness, pr.witness);
  }
  o.require(min_witness >= -1e-10, "min witness " + sci(min_witness));
}

void strong_coupling(Outcome& o) {
  HamiltonianConfig cfg;
  cfg.g = 0.5;
  const Grid grid(64, -10.0, 10.0);
  const SpinorField psi = project_energy(make_gaussian_packet(grid, 0.0, 0.0, 1.0), 1, cfg);
  const DensityMatrix rho0 = DensityMatrix::from_pure(psi);
  DenseOptions opts;
  opts.integrator = DenseIntegrator::strang_exact;
  const DenseRun cons = evolve_dense(rho0, cfg, DfegParams::make(100.0, cfg), 0.1, 10,
                                     LindbladMode::conservative, opts);
  std::vector<double> sig = {25.0, 50.0, 100.0, 200.0, 400.0}, td;
  for (double s : sig) {
    const DenseRun run =
        evolve_dense(rho0, cfg, DfegParams::make(s, cfg), 0.1, 10, LindbladMode::full, opts);
    td.push_back(trace_distance(run.final_state(), cons.final_state()));
  }
  bool monotone = true;
  for (std::size_t k = 1; k < td.size(); ++k) monotone = monotone && td[k] < td[k - 1];
  const double slope = log_log_slope(sig, td);
  o.require(monotone, "monotone decrease, td(25) = " + sci(td.front()) +
                          ", td(400) = " + sci(td.back()));
  o.require(std::abs(slope + 1.0) <= 0.15, "slope " + sci(slope));
}

void unravel_vs_dense(Outcome& o) {
  HamiltonianConfig cfg;
  cfg.g = 0.5;
  const Grid grid(128, -10.0, 10.0);
  const SpinorField psi = project_energy(make_gaussian_packet(grid, 0.0, 0.0, 1.0), 1, cfg);
  const DfegParams params = DfegParams::make(100.0, cfg);
  DenseOptions opts;
  opts.integrator = DenseIntegrator::strang_exact;
  const DenseRun d =
      evolve_dense(DensityMatrix::from_pure(psi), cfg, params, 0.1, 10, LindbladMode::full, opts);
  const Ensemble e = unravel(psi, cfg, params, 0.1, 10, 2000, 20240611);
  s3_drifts.push_back(column_drift(e.series, "S3"));
  // The criterion is judged at the final time. The max over every recorded
  // time is 30 correlated comparisons and is reported for information only.
  const std::size_t last = d.series.rows() - 1;
  double at_end = 0.0, path_max = 0.0;
  for (std::size_t k = 1; k <= last; ++k) {
    for (const auto& [col, se] : {std::pair{"z", "se_z"}, std::pair{"p3", "se_p"},
                                  std::pair{"purity", "se_purity"}}) {
      const double s = std::max(e.series.at(k, se), 1e-15);
      const double r = std::abs(e.series.at(k, col) - d.series.at(k, col)) / s;
      path_max = std::max(path_max, r);
      if (k == last) at_end = std::max(at_end, r);
    }
  }
  o.require(at_end < 3.0, "max |ensemble - dense| / SE at T = " + sci(at_end));
  o.note("max over all recorded times " + sci(path_max));
}

void spin_preservation(Outcome& o) {
  HamiltonianConfig cfg;
  cfg.g = 0.5;
  const double d = spin_dissipator_check(DfegParams::make(100.0, cfg), Grid(64, -10.0, 10.0), cfg);
  o.require(d <= 1e-14, "max |D[S_j]| = " + sci(d));
  const double worst = *std::max_element(s3_drifts.begin(), s3_drifts.end());
  o.require(worst < 1e-9, "max S3 drift over " + std::to_string(s3_drifts.size()) +
                              " runs = " + sci(worst));
}

void spectral(Outcome& o) {
  std::vector<double> worst_by_mu0;
  bool all_found = true;
  for (double mu0 : {50.0, 100.0, 200.0}) {
    const LevelTable t = find_levels(SpectralParams::for_mu0(mu0, 1), 6);
    double worst = 0.0;
    for (const auto& r : t.rows) {
      all_found = all_found && r.found;
      worst = std::max(worst, r.rel_gap);
    }
    worst_by_mu0.push_back(worst);
  }
  o.require(all_found, "all roots bracketed");
  o.require(worst_by_mu0[0] < 1e-3 && worst_by_mu0[1] < 1e-3 && worst_by_mu0[2] < 1e-3,
            "max rel gap " + sci(worst_by_mu0[0]) + ", " + sci(worst_by_mu0[1]) + ", " +
                sci(worst_by_mu0[2]));
  o.require(worst_by_mu0[0] > worst_by_mu0[1] && worst_by_mu0[1] > worst_by_mu0[2],
            "monotone in mu0");

  double worst_k = 0.0;
  for (const cplx nu : {cplx(0.5, 0.0), cplx(0.5, 1.0), cplx(0.5, 3.0), cplx(0.3, 2.0)}) {
    for (double x : {0.5, 1.0, 2.0, 4.0}) {
      const cplx a = bessel_k_complex_order(nu, x);
      const cplx b = oracle::bessel_k_series(nu, x);
      worst_k = std::max(worst_k, std::abs(a - b) / std::abs(b));
    }
  }
  o.require(worst_k < 1e-8, "K kernel vs series " + sci(worst_k));
}

void neutron(Outcome& o) {
  const NeutronScaleReport r = neutron_scale_report(neutron_si_config());
  o.require(r.mu0 >= 1e30 && r.mu0 <= 1e32, "mu0 = " + sci(r.mu0));
  o.require(r.delta_nu_01 >= 1e-21 && r.delta_nu_01 <= 1e-19,
            "delta nu_01 = " + sci(r.delta_nu_01) + " Hz");
}

void nonrel(Outcome& o) {
  const LimitTable t =
      limit_convergence_study({2.0, 5.0, 10.0, 20.0}, LimitScenario::free_fall, LimitOptions{});
  o.require(std::abs(t.fitted_slope + 2.0) <= 0.3, "slope " + sci(t.fitted_slope));
}

void qbounce(Outcome& o) {
  HamiltonianConfig cfg;
  cfg.c = 1.0;
  cfg.g = 0.0;
  const auto pts = dirichlet_limit_check(cfg, {50.0});
  o.require(pts[0].transmitted < 1e-3, "transmitted " + sci(pts[0].transmitted));
  o.require(pts[0].max_j3_ratio < 1e-3, "J3 / peak flux " + sci(pts[0].max_j3_ratio));

  HamiltonianConfig big;
  big.c = 10.0;
  big.g = 1.0;
  MirrorConfig m;
  m.v0 = 10.0 * big.rest_energy();
  big.mirror = m;
  const Grid grid(1024, -5.0, 15.0);
  const SpinorField psi = project_energy(make_gaussian_packet(grid, 3.0, 0.0, 0.5), 1, big);
  const BounceRun run = qbounce_run(psi, big, 5e-4, 80000, 20);
  s3_drifts.push_back(run.max_s3_drift);
  const double e0 = big.mass * big.g * default_x0(big);
  const AiryZeros a = airy_zero_magnitudes(7);
  const auto peaks = autocorrelation_peaks(run.auto_t, run.autocorrelation, big.rest_energy(),
                                           big.hbar, 0.5 * e0 * a(1), e0 * 0.5 * (a(6) + a(7)),
                                           0.002);
  double worst = 0.0;
  double prev = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const double level = e0 * a(n);
    double best = std::nan("");
    for (const auto& p : peaks) {
      if (std::abs(p.energy - level) > 0.5 * e0 * (a(n + 1) - a(n))) continue;
      if (std::isnan(best) || std::abs(p.energy - level) < std::abs(best - level)) best = p.energy;
    }
    if (std::isnan(best)) {
      worst = 1.0;
      break;
    }
    if (n > 1) {
      const double sl = e0 * (a(n) - a(n - 1));
      worst = std::max(worst, std::abs((best - prev) - sl) / sl);
    }
    prev = best;
  }
  o.require(worst < 0.05, "bouncer spacing rel error " + sci(worst));
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  FreeFall ff;
  const std::vector<Entry> entries = {
      {"beta_decay", [&](Outcome& o) {
         ff = free_fall_preset();
         for (const auto* t : {&ff.matter, &ff.antimatter, &ff.mixed}) {
           s3_drifts.push_back(column_drift(t->series, "S3"));
         }
         beta_decay(ff, o);
       }},
      {"equivalence_principle", [&](Outcome& o) { equivalence(ff, o); }},
      {"ehrenfest_suite", ehrenfest},
      {"dfeg_purity_law", purity_law},
      {"strong_coupling_limit", strong_coupling},
      {"unraveling_dense_equivalence", unravel_vs_dense},
      {"spectral_cross_validation", spectral},
      {"neutron_report", neutron},
      {"nonrelativistic_limit", nonrel},
      {"qbounce_reflection", qbounce},
      // Last so it sees the S3 drifts of every family above.
      {"spin_preservation", spin_preservation},
  };
  int failed = 0;
  for (const auto& e : entries) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.run(o);
    } catch (const std::exception& ex) {
      o.require(false, std::string("exception: ") + ex.what());
    }
    std::printf("%s %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", e.name, seconds_since(t0),
                o.detail.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu primary criteria passed\n", static_cast<int>(entries.size()) - failed,
              entries.size());
  return failed == 0 ? 0 : 1;
}
