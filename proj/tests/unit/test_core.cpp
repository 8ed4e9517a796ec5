#include <cmath>
#include <numeric>

#include "dfeg/core/density.hpp"
#include "dfeg/core/fft.hpp"
#include "dfeg/core/gamma.hpp"
#include "dfeg/core/grid.hpp"
#include "dfeg/core/observables.hpp"
#include "dfeg/core/operator.hpp"
#include "dfeg/core/packet.hpp"
#include "dfeg/core/quadrature.hpp"
#include "dfeg/core/rng.hpp"
#include "dfeg/core/timeseries.hpp"
#include "doctest.h"

using namespace dfeg;

TEST_SUITE("core") {
  TEST_CASE("gamma matrices satisfy the Clifford algebra exactly") {
    const GammaSet& g = gammas();
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) {
        const Eigen::Matrix4cd ac = g.gamma(mu) * g.gamma(nu) + g.gamma(nu) * g.gamma(mu);
        const Eigen::Matrix4cd expect = 2.0 * eta(mu, nu) * Eigen::Matrix4cd::Identity();
        CHECK((ac - expect).norm() == 0.0);
      }
    }
    CHECK((g.gamma5 * g.gamma5 - Eigen::Matrix4cd::Identity()).norm() == 0.0);
    CHECK((g.beta * g.alpha3 + g.alpha3 * g.beta).norm() == 0.0);
    CHECK((g.beta - g.gamma0).norm() == 0.0);
  }

  TEST_CASE("grid spacing and FFT-ordered wavenumbers") {
    const Grid grid(8, -4.0, 4.0);
    CHECK(grid.dz() == doctest::Approx(1.0));
    CHECK(grid.z(0) == -4.0);
    CHECK(grid.k(1) == doctest::Approx(2.0 * kPi / 8.0));
    CHECK(grid.k(4) == doctest::Approx(-4.0 * 2.0 * kPi / 8.0));
    CHECK(grid.nearest_index(0.4) == 4);
    CHECK_THROWS_AS(require_same_grid(grid, Grid(16, -4.0, 4.0)), DimensionError);
  }

  TEST_CASE("FFT round trip and a single mode") {
    const std::size_t n = 64;
    const auto plan = FftPlan::get(n);
    std::vector<cplx> x(n), y;
    for (std::size_t i = 0; i < n; ++i) x[i] = std::polar(1.0, 2.0 * kPi * 3.0 * i / n);
    y = x;
    plan->forward(y.data());
    CHECK(std::abs(y[3] - cplx(64.0, 0.0)) < 1e-12);
    CHECK(std::abs(y[5]) < 1e-12);
    plan->backward(y.data());
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(y[i] - x[i]));
    CHECK(err < 1e-14);
  }

  TEST_CASE("gaussian packet is normalized and rejects bad widths") {
    const Grid grid(512, -10.0, 10.0);
    const SpinorField psi = make_gaussian_packet(grid, 1.0, 0.5, 1.0);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
    const Observables o = measure(psi, 1.0);
    CHECK(o.z == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(o.p == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(o.beta == doctest::Approx(1.0));
    CHECK_THROWS_AS(make_gaussian_packet(grid, 0.0, 0.0, 0.01), ConfigError);
    CHECK_THROWS_AS(make_gaussian_packet(grid, 9.0, 0.0, 1.0), ConfigError);
  }

  TEST_CASE("identity expectation on a normalized state is one") {
    const Grid grid(128, -8.0, 8.0);
    const SpinorField psi = make_gaussian_packet(grid, 0.0, 0.0, 1.0);
    CHECK(expectation(psi, Operator::identity()).real() == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("operator apply agrees with its dense matrix") {
    const Grid grid(32, -4.0, 4.0);
    CounterRng rng(5, 0);
    SpinorField psi(grid);
    for (cplx& v : psi.values()) v = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    const Operator op = Operator::spin(gammas().alpha3) * Operator::position() * Operator::momentum();
    const SpinorField a = op.apply(psi, 1.0);
    const Eigen::MatrixXcd m = op.dense(grid, 1.0);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.storage().size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = psi.storage()[static_cast<std::size_t>(i)];
    const Eigen::VectorXcd b = m * v;
    double err = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      err = std::max(err, std::abs(b(i) - a.storage()[static_cast<std::size_t>(i)]));
    }
    CHECK(err < 1e-12);
  }

  TEST_CASE("density matrix of a pure state") {
    const Grid grid(32, -6.0, 6.0);
    const DensityMatrix rho = DensityMatrix::from_pure(make_gaussian_packet(grid, 0.0, 0.0, 1.0));
    CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rho.hermiticity_error() < 1e-16);
    CHECK(rho.min_eigenvalue() > -1e-14);
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(grid);
    CHECK(purity(mixed) == doctest::Approx(1.0 / (4.0 * 32.0)));
    CHECK(trace_distance(rho, rho) < 1e-14);
  }

  TEST_CASE("adaptive quadrature on smooth and peaked integrands") {
    const auto r = integrate_adaptive<double>([](double x) { return std::exp(-x); }, 0.0, 40.0, 1e-13);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 - std::exp(-40.0)).epsilon(1e-13));
    const auto s = integrate_adaptive<double>(
        [](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-12);
    CHECK(s.value == doctest::Approx(2.0 * std::atan(100.0) / 1e-2).epsilon(1e-11));
  }

  TEST_CASE("counter RNG is a pure function of seed, stream and counter") {
    CounterRng a(42, 7), b(42, 7), c(42, 8);
    for (int i = 0; i < 100; ++i) {
      const double x = a.uniform();
      CHECK(x == b.uniform());
      CHECK(x > 0.0);
      CHECK(x < 1.0);
    }
    CHECK(a.uniform() != c.uniform());
  }

  TEST_CASE("time series CSV uses 17 significant digits and LF") {
    TimeSeries ts({"t", "x"});
    ts.push_row({0.1, 1.0 / 3.0});
    CHECK(ts.to_csv() == "t,x\n0.10000000000000001,0.33333333333333331\n");
    CHECK_THROWS(ts.push_row({1.0}));
    CHECK(ts.column_index("x") == 1);
  }
}
