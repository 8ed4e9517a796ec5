#include <omp.h>

#include <complex>

#include "dfeg/core/fft.hpp"
#include "dfeg/kernels/kernels.hpp"

namespace dfeg::kernels {

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

namespace omp {

void potential_phase(std::span<cplx> psi, std::span<const cplx> phase) {
  const auto n = static_cast<std::ptrdiff_t>(phase.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const cplx a = phase[i];
    const cplx b = std::conj(a);
    psi[i] *= a;
    psi[n + i] *= a;
    psi[2 * n + i] *= b;
    psi[3 * n + i] *= b;
  }
}

void kinetic_modes(std::span<cplx> psi_hat, std::span<const KineticMode> modes) {
  const auto n = static_cast<std::ptrdiff_t>(modes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const KineticMode& m = modes[k];
    const cplx a0 = psi_hat[k], a1 = psi_hat[n + k];
    const cplx a2 = psi_hat[2 * n + k], a3 = psi_hat[3 * n + k];
    psi_hat[k] = m.d_up * a0 + m.off * a2;
    psi_hat[2 * n + k] = m.off * a0 + m.d_lo * a2;
    psi_hat[n + k] = m.d_up * a1 - m.off * a3;
    psi_hat[3 * n + k] = -m.off * a1 + m.d_lo * a3;
  }
}

double norm_sq(std::span<const cplx> v) {
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  double s = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : s)
  for (std::ptrdiff_t i = 0; i < n; ++i) s += std::norm(v[i]);
  return s;
}

void separable_superop(const cplx* rho, cplx* out, std::size_t d, std::span<const cplx> a,
                       std::span<const cplx> b, std::span<const cplx> c,
                       std::span<const cplx> e) {
  const auto nd = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < nd; ++j) {
    const cplx bj = std::conj(b[j]);
    const cplx ej = e[j];
    const std::size_t off = static_cast<std::size_t>(j) * d;
    for (std::size_t i = 0; i < d; ++i) {
      out[off + i] = (a[i] * bj + c[i] + ej) * rho[off + i];
    }
  }
}

void hamiltonian_modes(cplx* data, std::size_t n, std::size_t cols, std::span<const double> cp,
                       double mc2) {
  const auto nc = static_cast<std::ptrdiff_t>(cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    cplx* v = data + static_cast<std::size_t>(c) * 4 * n;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx a0 = v[k], a1 = v[n + k], a2 = v[2 * n + k], a3 = v[3 * n + k];
      v[k] = mc2 * a0 + cp[k] * a2;
      v[2 * n + k] = cp[k] * a0 - mc2 * a2;
      v[n + k] = mc2 * a1 - cp[k] * a3;
      v[3 * n + k] = -cp[k] * a1 - mc2 * a3;
    }
  }
}

void fft_columns(cplx* data, std::size_t n, std::size_t cols, int sign) {
  const auto plan = FftPlan::get(n);
  const auto nb = static_cast<std::ptrdiff_t>(4 * cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    if (sign < 0) {
      plan->forward(data + static_cast<std::size_t>(b) * n);
    } else {
      plan->backward(data + static_cast<std::size_t>(b) * n);
    }
  }
}

}  // namespace omp
}  // namespace dfeg::kernels
