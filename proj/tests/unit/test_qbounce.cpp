#include <cmath>

#include "dfeg/core/observables.hpp"
#include "dfeg/core/packet.hpp"
#include "dfeg/dynamics/dirac.hpp"
#include "dfeg/qbounce/bounce.hpp"
#include "dfeg/qbounce/mirror.hpp"
#include "doctest.h"

using namespace dfeg;

namespace {

// Large-c bouncer: c = 10 keeps the fall from z0 = 3 nonrelativistic.
struct Bouncer {
  HamiltonianConfig cfg;
  Grid grid{1024, -5.0, 15.0};
  SpinorField psi{grid};
  Bouncer() {
    cfg.c = 10.0;
    cfg.g = 1.0;
    MirrorConfig m;
    m.v0 = 10.0 * cfg.rest_energy();
    m.reg_width = 0.1;
    cfg.mirror = m;
    psi = project_energy(make_gaussian_packet(grid, 3.0, 0.0, 0.5), 1, cfg);
  }
};

}  // namespace

TEST_SUITE("qbounce") {
  TEST_CASE("mirror step is the identity without a mirror and unitary with one") {
    HamiltonianConfig cfg;
    const Grid grid(256, -8.0, 8.0);
    const SpinorField psi = project_energy(make_gaussian_packet(grid, 1.0, 0.0, 1.0), 1, cfg);
    MirrorConfig off;
    CHECK(mirror_potential_step(psi, 0.1, off, cfg).l2_distance(psi) == 0.0);
    MirrorConfig delta;
    delta.model = MirrorModel::delta_term;
    delta.delta_weight_scale = 0.0;
    CHECK(mirror_potential_step(psi, 0.1, delta, cfg).l2_distance(psi) == 0.0);
    MirrorConfig step;
    step.v0 = 50.0;
    CHECK(mirror_potential_step(psi, 0.1, step, cfg).norm() == doctest::Approx(psi.norm()).epsilon(1e-13));
  }

  TEST_CASE("mirror validation") {
    HamiltonianConfig cfg;
    const Grid grid(256, -8.0, 8.0);
    MirrorConfig m;
    m.v0 = 10.0;
    m.z_mirror = 20.0;
    CHECK_THROWS_AS(validate_mirror(grid, m, cfg), ConfigError);
    m.z_mirror = 0.0;
    m.model = MirrorModel::delta_term;
    m.reg_width = 0.5 * grid.dz();
    CHECK_THROWS_AS(validate_mirror(grid, m, cfg), ConfigError);
    m.reg_width = 0.0;  // selects 2 dz
    CHECK_NOTHROW(validate_mirror(grid, m, cfg));
    CHECK(effective_reg_width(grid, m) == doctest::Approx(2.0 * grid.dz()));
  }

  TEST_CASE("turning points of a sampled bounce") {
    std::vector<double> t, z;
    for (int k = 0; k <= 1000; ++k) {
      t.push_back(0.01 * k);
      z.push_back(std::abs(std::cos(0.5 * kPi * t.back())) + 1e-4 * std::sin(40.0 * t.back()));
    }
    const auto tp = turning_points(t, z, 0.5);
    REQUIRE(tp.size() >= 9);
    CHECK(tp[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(tp[1] == doctest::Approx(2.0).epsilon(0.02));
  }

  TEST_CASE("autocorrelation peaks recover the energies of a synthetic signal") {
    const double rest = 7.0;
    std::vector<double> t;
    std::vector<cplx> a;
    for (int k = 0; k < 4000; ++k) {
      const double tt = 0.02 * k;
      t.push_back(tt);
      a.push_back(std::exp(cplx(0.0, -(rest + 1.8) * tt)) * 0.6 +
                  std::exp(cplx(0.0, -(rest + 3.2) * tt)) * 0.3);
    }
    const auto peaks = autocorrelation_peaks(t, a, rest, 1.0, 0.5, 5.0);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].energy == doctest::Approx(1.8).epsilon(1e-3));
    CHECK(peaks[1].energy == doctest::Approx(3.2).epsilon(1e-3));
    CHECK(peaks[0].height > peaks[1].height);
  }

  TEST_CASE("static bouncer turns at least twice, keeps S3, and a still oscillator changes nothing") {
    Bouncer b;
    // Two classical periods 2 sqrt(2 z0 / g) ~ 4.9 each.
    const double dt = 5e-4;
    const auto steps = static_cast<std::size_t>(10.0 / dt);
    const BounceRun run = qbounce_run(b.psi, b.cfg, dt, steps, 100);
    CHECK(run.turning_times.size() >= 2);
    CHECK(run.max_s3_drift < 1e-9);
    CHECK(run.final_below_mirror < 1e-3);

    HamiltonianConfig still = b.cfg;
    still.mirror->amplitude = 0.3;
    still.mirror->omega = 0.0;
    const BounceRun same = qbounce_run(b.psi, still, dt, 2000, 100);
    const BounceRun ref = qbounce_run(b.psi, b.cfg, dt, 2000, 100);
    CHECK(same.series.to_csv() == ref.series.to_csv());
  }

  TEST_CASE("entropic bounce tracks the conservative one") {
    HamiltonianConfig cfg;
    cfg.g = 1.0;
    MirrorConfig m;
    m.v0 = 10.0;
    m.reg_width = 0.32;
    cfg.mirror = m;
    const Grid grid(128, -8.0, 12.0);
    const DensityMatrix rho = DensityMatrix::from_pure(
        project_energy(make_gaussian_packet(grid, 3.0, 0.0, 0.6), 1, cfg));
    const DfegParams params = DfegParams::make(200.0, cfg);
    DenseOptions opts;
    opts.integrator = DenseIntegrator::strang_exact;
    const BounceRun e = qbounce_run(rho, cfg, params, LindbladMode::full, 0.1, 50, opts);
    const BounceRun c = qbounce_run(rho, cfg, params, LindbladMode::conservative, 0.1, 50, opts);
    const auto ze = e.series.column("z");
    const auto zc = c.series.column("z");
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ze.size(); ++k) {
      num += (ze[k] - zc[k]) * (ze[k] - zc[k]);
      den += zc[k] * zc[k];
    }
    CHECK(std::sqrt(num / den) < 0.02);
    CHECK(e.max_s3_drift < 1e-9);
  }

  TEST_CASE("Dirichlet sweep") {
    ReflectionScenario sc;
    sc.n_points = 8192;
    sc.z_min = -24.0;
    sc.z_max = 24.0;
    sc.z0 = 4.0;
    sc.width = 0.7;
    sc.t_end = 12.0;
    HamiltonianConfig cfg;
    cfg.g = 0.0;
    const auto pts = dirichlet_limit_check(cfg, {0.0, 10.0, 100.0}, sc);
    // The free control passes straight through the mirror plane.
    CHECK(pts[0].max_boundary_amplitude > 0.5);
    CHECK(pts[0].max_j3_ratio > 0.1);
    CHECK(pts[1].max_boundary_amplitude < pts[0].max_boundary_amplitude);
    CHECK(pts[2].max_boundary_amplitude < pts[1].max_boundary_amplitude);
    CHECK(pts[2].max_j3_ratio < pts[1].max_j3_ratio);

  }

  TEST_CASE("boundary amplitude falls with c at fixed V0/mc^2") {
    // A sharp step at large c scatters grid-scale momenta that wrap around the
    // box, so both runs use the same slightly smoothed wall.
    auto amplitude = [](double c) {
      HamiltonianConfig cfg;
      cfg.c = c;
      cfg.g = 0.0;
      MirrorConfig m;
      m.v0 = 10.0 * cfg.rest_energy();
      m.reg_width = 0.2;
      cfg.mirror = m;
      const Grid grid(8192, -24.0, 24.0);
      const SpinorField psi = project_energy(make_gaussian_packet(grid, 7.0, -0.5, 1.5), 1, cfg);
      const BounceRun run = qbounce_run(psi, cfg, 0.005, 3000, 10);
      double a = 0.0;
      for (double v : run.series.column("boundary_amplitude")) a = std::max(a, v);
      return a;
    };
    CHECK(amplitude(3.0) < amplitude(1.0));
  }

  TEST_CASE("delta mirror smearing converges at second order in reg_width") {
    // Smooth test density f; the unsmeared term integrates to -(hbar c/2) f(z_m).
    HamiltonianConfig cfg;
    const Grid grid(4096, -16.0, 16.0);
    const double zm = 0.3;
    auto f = [](double z) { return std::exp(-0.5 * (z - 0.1) * (z - 0.1)) * (1.0 + 0.2 * z); };
    auto smeared = [&](double w) {
      MirrorConfig m;
      m.model = MirrorModel::delta_term;
      m.z_mirror = zm;
      m.reg_width = w;
      const std::vector<double> v = mirror_profile(grid, m, cfg, 0.0);
      double s = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) s += v[i] * f(grid.z(i));
      return s * grid.dz();
    };
    const double dz = grid.dz();
    const double a2 = smeared(2.0 * dz), a4 = smeared(4.0 * dz), a8 = smeared(8.0 * dz);
    const double exact = -0.5 * cfg.hbar * cfg.c * f(zm);
    CHECK((a8 - a4) / (a4 - a2) == doctest::Approx(4.0).epsilon(0.05));
    CHECK(std::abs((4.0 * a2 - a4) / 3.0 - exact) < 0.01 * std::abs(a2 - exact));
    CHECK(std::abs(a2 - exact) < 1e-3 * std::abs(exact));
  }

  TEST_CASE("boundary sample reads the mirror cell") {
    const Grid grid(64, -4.0, 4.0);
    SpinorField psi(grid);
    const std::size_t i0 = grid.nearest_index(0.0);
    psi.at(0, i0) = 0.6;
    psi.at(2, i0) = 0.8;
    psi.at(0, i0 + 3) = 2.0;
    MirrorConfig m;
    const BoundarySample s = boundary_sample(psi, m, 0.0);
    CHECK(s.boundary_amplitude == doctest::Approx(0.5));
    CHECK(s.j3_at_mirror == doctest::Approx(2.0 * 0.6 * 0.8));
    CHECK(probability_current(psi)[i0] == doctest::Approx(0.96));
  }
}
