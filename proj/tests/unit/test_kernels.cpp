#include <vector>

#include "dfeg/core/rng.hpp"
#include "dfeg/kernels/kernels.hpp"
#include "doctest.h"

using namespace dfeg;

namespace {

std::vector<cplx> random_buffer(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<cplx> v(n);
  for (cplx& x : v) x = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("omp kernels agree with the serial reference") {
    // Force a team even on a single core so the parallel path actually runs.
    const int saved = kernels::max_threads();
    kernels::set_threads(4);
    const std::size_t n = 256;
    const auto psi = random_buffer(4 * n, 1);

    SUBCASE("potential_phase") {
      const auto phase = random_buffer(n, 2);
      auto a = psi, b = psi;
      kernels::serial::potential_phase(a, phase);
      kernels::omp::potential_phase(b, phase);
      CHECK(max_diff(a, b) == 0.0);
    }
    SUBCASE("kinetic_modes") {
      const auto r = random_buffer(3 * n, 3);
      std::vector<kernels::KineticMode> modes(n);
      for (std::size_t k = 0; k < n; ++k) modes[k] = {r[3 * k], r[3 * k + 1], r[3 * k + 2]};
      auto a = psi, b = psi;
      kernels::serial::kinetic_modes(a, modes);
      kernels::omp::kinetic_modes(b, modes);
      CHECK(max_diff(a, b) == 0.0);
    }
    SUBCASE("norm_sq") {
      const double a = kernels::serial::norm_sq(psi);
      const double b = kernels::omp::norm_sq(psi);
      CHECK(std::abs(a - b) <= 1e-13 * a);
    }
    SUBCASE("separable_superop") {
      const std::size_t d = 64;
      const auto rho = random_buffer(d * d, 4);
      const auto a = random_buffer(d, 5), b = random_buffer(d, 6), c = random_buffer(d, 7),
                 e = random_buffer(d, 8);
      std::vector<cplx> x(d * d), y(d * d);
      kernels::serial::separable_superop(rho.data(), x.data(), d, a, b, c, e);
      kernels::omp::separable_superop(rho.data(), y.data(), d, a, b, c, e);
      CHECK(max_diff(x, y) == 0.0);
    }
    SUBCASE("hamiltonian_modes and fft_columns") {
      const std::size_t cols = 3;
      const auto data = random_buffer(4 * n * cols, 9);
      std::vector<double> cp(n);
      for (std::size_t k = 0; k < n; ++k) cp[k] = 0.1 * static_cast<double>(k) - 5.0;
      auto a = data, b = data;
      kernels::serial::hamiltonian_modes(a.data(), n, cols, cp, 1.0);
      kernels::omp::hamiltonian_modes(b.data(), n, cols, cp, 1.0);
      CHECK(max_diff(a, b) == 0.0);
      a = data;
      b = data;
      kernels::serial::fft_columns(a.data(), n, cols, -1);
      kernels::omp::fft_columns(b.data(), n, cols, -1);
      CHECK(max_diff(a, b) < 1e-12);
      kernels::omp::fft_columns(b.data(), n, cols, +1);
      CHECK(max_diff(b, data) < 1e-14);
    }
    kernels::set_threads(saved);
  }
}
