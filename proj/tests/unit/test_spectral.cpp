#include <cmath>

#include "dfeg/spectral/bessel.hpp"
#include "dfeg/spectral/levels.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace dfeg;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("K at half-integer order has a closed form") {
    const cplx k = bessel_k_complex_order(0.5, 1.0);
    CHECK(rel(k, std::sqrt(kPi / 2.0) * std::exp(-1.0)) < 1e-12);
  }

  TEST_CASE("K against independent evaluations") {
    CHECK(rel(bessel_k_complex_order(0.0, 2.0), std::cyl_bessel_k(0.0, 2.0)) < 1e-10);
    CHECK(rel(bessel_k_complex_order(0.3, 2.0), oracle::bessel_k_series(0.3, 2.0)) < 1e-10);

    // 20-point lattice: series for small x, asymptotic expansion for large x.
    double worst = 0.0;
    for (const cplx nu : {cplx(0.5, 0.0), cplx(0.5, 1.0), cplx(0.5, 3.0), cplx(0.3, 2.0)}) {
      for (double x : {0.5, 1.0, 2.0}) {
        worst = std::max(worst, rel(bessel_k_complex_order(nu, x), oracle::bessel_k_series(nu, x)));
      }
      for (double x : {60.0, 200.0}) {
        worst = std::max(worst, rel(bessel_k_complex_order(nu, x), oracle::bessel_k_asymptotic(nu, x)));
      }
    }
    CHECK(worst < 1e-8);
  }

  TEST_CASE("K of conjugate order is the conjugate") {
    const cplx a = bessel_k_complex_order(cplx(0.5, 3.0), 5.0);
    const cplx b = bessel_k_complex_order(cplx(0.5, -3.0), 5.0);
    CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
  }

  TEST_CASE("K rejects arguments outside the quadrature window") {
    CHECK_THROWS_AS(bessel_k_complex_order(cplx(0.5, 1000.0), 1.0), ConfigError);
    CHECK_THROWS_AS(bessel_k_complex_order(0.5, 1e-5), ConfigError);
  }

  TEST_CASE("Airy zeros") {
    const AiryZeros az = airy_zero_magnitudes(10);
    // Frozen from bisection on the Maclaurin oracle.
    CHECK(az(1) == doctest::Approx(2.338107410459767).epsilon(1e-10));
    CHECK(az(2) == doctest::Approx(4.087949444130971).epsilon(1e-10));
    CHECK(az(3) == doctest::Approx(5.520559828095551).epsilon(1e-10));
    CHECK(az(4) == doctest::Approx(6.786708090071759).epsilon(1e-10));
    CHECK(az(5) == doctest::Approx(7.944133587120853).epsilon(1e-10));
    for (int n = 1; n <= az.size(); ++n) {
      if (n > 1) CHECK(az(n) > az(n - 1));
      CHECK(std::abs(airy_ai_negative(az(n))) < 1e-12);
      if (az(n) <= 8.0) CHECK(std::abs(oracle::airy_ai_maclaurin(-az(n))) < 1e-11);
    }
  }

  TEST_CASE("quantization residual brackets each level") {
    const SpectralParams p = SpectralParams::for_mu0(50.0, 1);
    const std::vector<double> asym = asymptotic_levels(50.0, 5);
    for (std::size_t n = 0; n + 1 < asym.size(); ++n) {
      const double mid_lo = n == 0 ? asym[0] - 0.5 * (asym[1] - asym[0]) : 0.5 * (asym[n - 1] + asym[n]);
      const double mid_hi = 0.5 * (asym[n] + asym[n + 1]);
      CHECK(quantization_residual(mid_lo, p) * quantization_residual(mid_hi, p) < 0.0);
    }
    SpectralParams q = p;
    q.s = -1;
    CHECK(quantization_residual(asym[0] + 0.3, p) != quantization_residual(asym[0] + 0.3, q));
  }

  TEST_CASE("root finding agrees with the asymptotic expansion") {
    std::vector<double> prev;
    for (double mu0 : {50.0, 100.0, 200.0}) {
      const LevelTable t = find_levels(SpectralParams::for_mu0(mu0, 1), 6);
      REQUIRE(t.rows.size() == 6);
      std::vector<double> gaps;
      for (std::size_t n = 0; n < t.rows.size(); ++n) {
        CHECK(t.rows[n].found);
        if (n > 0) CHECK(t.rows[n].omega_root > t.rows[n - 1].omega_root);
        CHECK(t.rows[n].rel_gap < 1e-3);
        gaps.push_back(t.rows[n].rel_gap);
      }
      if (!prev.empty()) {
        for (std::size_t n = 0; n < gaps.size(); ++n) CHECK(gaps[n] < prev[n]);
      }
      prev = gaps;
    }
  }

  TEST_CASE("asymptotic expansion is dominated by its leading terms") {
    const double mu0 = 1e6;
    const double lead = mu0 - 0.5 + 2.338107410459767 * std::pow(2.0, -1.0 / 3.0) * 100.0;
    CHECK(asymptotic_levels(mu0, 1)[0] == doctest::Approx(lead).epsilon(1e-4));
    const auto big = asymptotic_levels(1e9, 3);
    const double spacing = (4.087949444130971 - 2.338107410459767) * std::pow(2.0, -1.0 / 3.0) * 1e3;
    CHECK(big[1] - big[0] == doctest::Approx(spacing).epsilon(1e-5));
  }

  TEST_CASE("neutron transition frequencies") {
    const HamiltonianConfig n = neutron_si_config();
    const TransitionFrequencies t = transition_frequencies(n, 0, 1);
    // m g x0 for the neutron is about 0.602 peV; (a2 - a1) times that is ~1.05 peV.
    const double pev = 1.602176634e-31;
    const double e01 = n.hbar * t.omega_nr / pev;
    CHECK(e01 > 1.0);
    CHECK(e01 < 1.1);
    const double x0 = std::cbrt(n.hbar * n.hbar / (2.0 * n.mass * n.mass * n.g));
    CHECK(t.omega_nr == doctest::Approx(n.mass * n.g * x0 / n.hbar *
                                        (4.087949444130971 - 2.338107410459767))
                            .epsilon(1e-10));
    const double nu = t.delta_omega / (2.0 * kPi);
    CHECK(nu > 1e-21);
    CHECK(nu < 1e-19);

    HamiltonianConfig flat = n;
    flat.g = 0.0;
    const TransitionFrequencies z = transition_frequencies(flat, 0, 1);
    CHECK(z.omega_nr == 0.0);
    CHECK(z.omega_d == 0.0);
    CHECK(z.delta_omega == 0.0);
  }

  TEST_CASE("normalization constants") {
    CHECK(normalization_constant(0.0, 1.0, NormalizationFamily::hankel) ==
          doctest::Approx(std::sqrt(1.0 / 8.0) / (2.0 * kPi)).epsilon(1e-15));
    CHECK(normalization_constant(0.0, 1.0, NormalizationFamily::hankel) ==
          doctest::Approx(0.056270).epsilon(1e-5));
    for (double kappa : {0.5, 3.0}) {
      const double omega = 0.7;
      const double ratio = normalization_constant(omega, kappa, NormalizationFamily::hankel) /
                           normalization_constant(omega, kappa, NormalizationFamily::bessel_k);
      CHECK(ratio == doctest::Approx(std::sqrt(2.0 * kPi * kPi / (8.0 * std::exp(kPi * omega))))
                         .epsilon(1e-14));
    }
    // cosh(pi Omega) = pi / |Gamma(1/2 + i Omega)|^2.
    const double g2 = std::norm(oracle::gamma(cplx(0.5, 1.0)));
    CHECK(g2 == doctest::Approx(oracle::gamma_half_abs2(1.0)).epsilon(1e-10));
    const double via_gamma = std::sqrt(2.0 * (kPi / g2) / (2.0 * kPi * kPi)) / (2.0 * kPi);
    CHECK(normalization_constant(1.0, 2.0, NormalizationFamily::bessel_k) ==
          doctest::Approx(via_gamma).epsilon(1e-10));
  }

  TEST_CASE("neutron scale report") {
    const HamiltonianConfig n = neutron_si_config();
    const NeutronScaleReport r = neutron_scale_report(n);
    CHECK(r.mu0 >= 1e30);
    CHECK(r.mu0 <= 1e32);
    CHECK_FALSE(r.root_finding_feasible);
    HamiltonianConfig heavy = n;
    heavy.mass *= 2.0;
    CHECK(neutron_scale_report(heavy).mu0 == doctest::Approx(2.0 * r.mu0).epsilon(1e-14));
    HamiltonianConfig strong = n;
    strong.g *= 2.0;
    CHECK(neutron_scale_report(strong).mu0 == doctest::Approx(0.5 * r.mu0).epsilon(1e-14));
  }

  TEST_CASE("level table CSV header") {
    const LevelTable t = find_levels(SpectralParams::for_mu0(50.0, 1), 2);
    const std::string csv = t.to_csv();
    CHECK(csv.substr(0, csv.find('\n')) == "n,Omega_root,Omega_asym,rel_gap,E_n_units");
    CHECK_THROWS_AS(SpectralParams::for_mu0(-1.0, 1).validate(), ConfigError);
  }
}
