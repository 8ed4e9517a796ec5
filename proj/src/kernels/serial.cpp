#include <complex>

#include "dfeg/core/fft.hpp"
#include "dfeg/kernels/kernels.hpp"

namespace dfeg::kernels::serial {

void potential_phase(std::span<cplx> psi, std::span<const cplx> phase) {
  const std::size_t n = phase.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = phase[i];
    const cplx b = std::conj(a);
    psi[i] *= a;
    psi[n + i] *= a;
    psi[2 * n + i] *= b;
    psi[3 * n + i] *= b;
  }
}

void kinetic_modes(std::span<cplx> psi_hat, std::span<const KineticMode> modes) {
  const std::size_t n = modes.size();
  for (std::size_t k = 0; k < n; ++k) {
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
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return s;
}

void separable_superop(const cplx* rho, cplx* out, std::size_t d, std::span<const cplx> a,
                       std::span<const cplx> b, std::span<const cplx> c,
                       std::span<const cplx> e) {
  for (std::size_t j = 0; j < d; ++j) {
    const cplx bj = std::conj(b[j]);
    for (std::size_t i = 0; i < d; ++i) {
      out[j * d + i] = (a[i] * bj + c[i] + e[j]) * rho[j * d + i];
    }
  }
}

void hamiltonian_modes(cplx* data, std::size_t n, std::size_t cols, std::span<const double> cp,
                       double mc2) {
  for (std::size_t c = 0; c < cols; ++c) {
    cplx* v = data + c * 4 * n;
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
  for (std::size_t b = 0; b < 4 * cols; ++b) {
    if (sign < 0) {
      plan->forward(data + b * n);
    } else {
      plan->backward(data + b * n);
    }
  }
}

}  // namespace dfeg::kernels::serial
