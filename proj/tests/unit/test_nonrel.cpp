#include <cmath>

#include "dfeg/lindblad/dfeg.hpp"
#include "dfeg/nonrel/nonrel.hpp"
#include "dfeg/qbounce/bounce.hpp"
#include "dfeg/spectral/levels.hpp"
#include "doctest.h"

using namespace dfeg;

namespace {

HamiltonianConfig unit_gravity() {
  HamiltonianConfig cfg;
  cfg.g = 1.0;
  return cfg;
}

Eigen::MatrixXcd pure_scalar(const ScalarField& phi) {
  const auto n = static_cast<Eigen::Index>(phi.grid().size());
  Eigen::VectorXcd v(n);
  const double s = std::sqrt(phi.grid().dz());
  for (Eigen::Index i = 0; i < n; ++i) v(i) = s * phi.values()[static_cast<std::size_t>(i)];
  return v * v.adjoint();
}

double scalar_trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Eigen::MatrixXcd d = a - b;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (d + d.adjoint()));
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

TEST_SUITE("nonrel") {
  TEST_CASE("free Schrodinger packet spreads analytically") {
    HamiltonianConfig cfg;
    SchrodingerOptions opts;
    opts.potential = PotentialMode::none;
    const Grid grid(1024, -20.0, 20.0);
    const double w = 1.0;
    const ScalarTrajectory tr =
        schrodinger_propagate(make_scalar_gaussian(grid, 0.0, 0.0, w), cfg, 0.01, 300, 100, opts);
    for (std::size_t k = 0; k < tr.series.rows(); ++k) {
      const double t = tr.series.at(k, "t");
      const double expect = std::sqrt(w * w + std::pow(t / (2.0 * w), 2));
      CHECK(tr.series.at(k, "width") == doctest::Approx(expect).epsilon(1e-10));
    }
  }

  TEST_CASE("linear potential gives exact Ehrenfest motion") {
    const HamiltonianConfig cfg = unit_gravity();
    const Grid grid(2048, -14.0, 10.0);
    const ScalarTrajectory tr =
        schrodinger_propagate(make_scalar_gaussian(grid, 0.0, 0.0, 1.0), cfg, 0.01, 200, 10);
    for (std::size_t k = 0; k < tr.series.rows(); ++k) {
      const double t = tr.series.at(k, "t");
      CHECK(std::abs(tr.series.at(k, "z") + 0.5 * t * t) < 1e-6);
      CHECK(std::abs(tr.series.at(k, "p3") + t) < 1e-6);
    }
  }

  TEST_CASE("two resolutions of the same Schrodinger run agree") {
    const HamiltonianConfig cfg = unit_gravity();
    const ScalarTrajectory a = schrodinger_propagate(
        make_scalar_gaussian(Grid(1024, -14.0, 10.0), 0.0, 0.0, 1.0), cfg, 0.01, 200, 2);
    const ScalarTrajectory b = schrodinger_propagate(
        make_scalar_gaussian(Grid(2048, -14.0, 10.0), 0.0, 0.0, 1.0), cfg, 0.01, 200, 2);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.series.rows(); ++k) {
      sum += std::pow(a.series.at(k, "z") - b.series.at(k, "z"), 2);
    }
    CHECK(std::sqrt(sum / static_cast<double>(a.series.rows())) < 1e-6);
  }

  TEST_CASE("Schrodinger bouncer levels follow the Airy zeros") {
    const HamiltonianConfig cfg = unit_gravity();
    SchrodingerOptions opts;
    MirrorConfig wall;
    wall.v0 = 200.0;
    wall.reg_width = 0.1;
    opts.wall = wall;
    const Grid grid(1024, -5.0, 15.0);
    const ScalarTrajectory tr =
        schrodinger_propagate(make_scalar_gaussian(grid, 3.0, 0.0, 0.5), cfg, 0.005, 30000, 4, opts);
    const auto peaks =
        autocorrelation_peaks(tr.auto_t, tr.autocorrelation, 0.0, 1.0, 1.0, 6.5, 0.002);
    const AiryZeros az = airy_zero_magnitudes(6);
    const double scale = std::cbrt(0.5);  // m g x0 with m = g = hbar = 1
    REQUIRE(peaks.size() >= 4);
    for (int n = 1; n <= 3; ++n) {
      const double spacing = peaks[static_cast<std::size_t>(n)].energy -
                             peaks[static_cast<std::size_t>(n - 1)].energy;
      CHECK(spacing == doctest::Approx(scale * (az(n + 1) - az(n))).epsilon(0.02));
    }
  }

  TEST_CASE("delta-prime term is antisymmetric about the mirror") {
    HamiltonianConfig cfg;
    SchrodingerOptions opts;
    opts.potential = PotentialMode::none;
    DeltaPrimeTerm d;
    d.z_mirror = 0.5;
    d.reg_width = 0.25;
    opts.delta_prime = d;
    const Grid grid(256, -8.0, 8.0);
    const std::vector<double> v = schrodinger_potential(grid, cfg, opts);
    const std::size_t im = grid.nearest_index(0.5);
    double worst = 0.0, peak = 0.0;
    for (std::size_t j = 1; j < 40; ++j) {
      worst = std::max(worst, std::abs(v[im + j] + v[im - j]));
      peak = std::max(peak, std::abs(v[im + j]));
    }
    CHECK(peak > 0.1);
    CHECK(worst < 1e-12 * peak);
    CHECK(std::abs(v[im]) < 1e-12 * peak);
  }

  TEST_CASE("delta-prime smearing converges at second order in reg_width") {
    // Against a smooth f the unsmeared term integrates to (hbar^2/4m) f'(z_m).
    HamiltonianConfig cfg;
    SchrodingerOptions opts;
    opts.potential = PotentialMode::none;
    const Grid grid(4096, -16.0, 16.0);
    const double zm = 0.3;
    auto f = [](double z) { return std::exp(-0.5 * (z - 0.1) * (z - 0.1)) * (1.0 + 0.2 * z); };
    auto df = [&](double z) { return f(z) * (-(z - 0.1) + 0.2 / (1.0 + 0.2 * z)); };
    auto smeared = [&](double w) {
      DeltaPrimeTerm d;
      d.z_mirror = zm;
      d.reg_width = w;
      opts.delta_prime = d;
      const std::vector<double> v = schrodinger_potential(grid, cfg, opts);
      double s = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) s += v[i] * f(grid.z(i));
      return s * grid.dz();
    };
    const double dz = grid.dz();
    const double a2 = smeared(2.0 * dz), a4 = smeared(4.0 * dz), a8 = smeared(8.0 * dz);
    const double exact = cfg.hbar * cfg.hbar / (4.0 * cfg.mass) * df(zm);
    CHECK((a8 - a4) / (a4 - a2) == doctest::Approx(4.0).epsilon(0.05));
    CHECK(std::abs((4.0 * a2 - a4) / 3.0 - exact) < 0.01 * std::abs(a2 - exact));
    CHECK(std::abs(a2 - exact) < 2e-3 * std::abs(exact));
  }

  TEST_CASE("scalar dissipator equals the upper block of the spinor dissipator") {
    HamiltonianConfig cfg;
    const Grid grid(32, -6.0, 6.0);
    const DfegParams params = DfegParams::make(50.0, cfg);
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Random(n, n);
    s = s * s.adjoint();
    s /= s.trace();
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(4 * n, 4 * n);
    big.topLeftCorner(n, n) = s;
    const Eigen::MatrixXcd full =
        dissipator_only(DensityMatrix(grid, big), cfg, params, LindbladMode::full);
    const Eigen::MatrixXcd scalar = nonrel_dissipator(s, grid, cfg, params);
    CHECK((full.topLeftCorner(n, n) - scalar).cwiseAbs().maxCoeff() < 1e-12);
    // Nothing leaks out of the block.
    Eigen::MatrixXcd rest = full;
    rest.topLeftCorner(n, n).setZero();
    CHECK(rest.cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("both models share one x0") {
    const HamiltonianConfig cfg = unit_gravity();
    const Grid grid(64, -10.0, 10.0);
    const DfegParams params = DfegParams::make(100.0, cfg);
    const NonrelDenseRun run = evolve_nonrel_dense(
        pure_scalar(make_scalar_gaussian(grid, 0.0, 0.0, 1.0)), grid, cfg, params, 0.1, 1,
        NonrelMode::full);
    CHECK(run.x0 == params.x0);
    CHECK(params.x0 == default_x0(cfg));
    CHECK(default_x0(cfg) == doctest::Approx(std::cbrt(0.5)).epsilon(1e-15));
  }

  TEST_CASE("scalar entropic evolution") {
    const HamiltonianConfig cfg = unit_gravity();
    const Grid grid(128, -12.0, 8.0);
    const Eigen::MatrixXcd rho0 = pure_scalar(make_scalar_gaussian(grid, 0.0, 0.0, 1.0));

    SUBCASE("strong coupling reproduces mg z") {
      const DfegParams params = DfegParams::make(1e4, cfg);
      const NonrelDenseRun a = evolve_nonrel_dense(rho0, grid, cfg, params, 0.1, 10, NonrelMode::full);
      const NonrelDenseRun b =
          evolve_nonrel_dense(rho0, grid, cfg, params, 0.1, 10, NonrelMode::conservative);
      CHECK(scalar_trace_distance(a.final_state, b.final_state) < 1e-3);
    }
    SUBCASE("no dissipator keeps purity") {
      DfegParams params = DfegParams::make(100.0, cfg);
      params.dissipator_enabled = false;
      const NonrelDenseRun run = evolve_nonrel_dense(rho0, grid, cfg, params, 0.1, 10, NonrelMode::full);
      for (double p : run.series.column("purity")) CHECK(std::abs(p - 1.0) < 1e-10);
    }
    SUBCASE("momentum falls at rate m g") {
      const NonrelDenseRun run = evolve_nonrel_dense(rho0, grid, cfg, DfegParams::make(100.0, cfg),
                                                     0.05, 20, NonrelMode::full);
      const auto t = run.series.column("t");
      const auto p = run.series.column("p3");
      for (std::size_t k = 1; k + 1 < t.size(); ++k) {
        CHECK(std::abs((p[k + 1] - p[k - 1]) / (t[k + 1] - t[k - 1]) + 1.0) < 1e-4);
      }
      const auto tr = run.series.column("trace");
      for (double v : tr) CHECK(std::abs(v - 1.0) < 1e-12);
      CHECK(run.min_eigenvalue > -1e-10);
    }
  }

  TEST_CASE("spin-orbit term vanishes in one dimension") {
    const auto zero = fw_spin_orbit_vector({0.0, 0.0, -9.81}, {0.0, 0.0, 3.5});
    for (double v : zero) CHECK(v == 0.0);
    const auto x = fw_spin_orbit_vector({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0});
    CHECK(x[2] == 1.0);
  }

  TEST_CASE("log-log slope and scenario names") {
    CHECK(log_log_slope({2.0, 5.0, 10.0, 20.0}, {0.75, 0.12, 0.03, 0.0075}) ==
          doctest::Approx(-2.0).epsilon(1e-12));
    for (auto s : {LimitScenario::free_fall, LimitScenario::dfeg, LimitScenario::qbounce_static}) {
      CHECK(limit_scenario_from_string(to_string(s)) == s);
    }
    CHECK_THROWS_AS(limit_scenario_from_string("bouncy"), ConfigError);
    LimitTable t;
    CHECK(t.to_csv().substr(0, t.to_csv().find('\n')) == "c,scenario,rms_error,fitted_slope");
  }
}
