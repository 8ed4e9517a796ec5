#include "dfeg/core/observables.hpp"

#include <cmath>

#include "dfeg/core/fft.hpp"

namespace dfeg {

std::vector<double> Observables::row(double t) const {
  return {t, beta, z, p, alpha3, S1, S2, S3, gamma5, theta, phi, theta_yt, norm, purity};
}

Observables measure(const SpinorField& psi, double hbar) {
  const Grid& g = psi.grid();
  const std::size_t n = g.size();
  const double dz = g.dz();
  Observables o;
  const auto u0 = psi.component(0), u1 = psi.component(1);
  const auto l0 = psi.component(2), l1 = psi.component(3);
  double up = 0, lo = 0, zz = 0, a3 = 0, s1 = 0, s2 = 0, s3 = 0, g5 = 0, th = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double nu0 = std::norm(u0[i]), nu1 = std::norm(u1[i]);
    const double nl0 = std::norm(l0[i]), nl1 = std::norm(l1[i]);
    up += nu0 + nu1;
    lo += nl0 + nl1;
    zz += g.z(i) * (nu0 + nu1 + nl0 + nl1);
    const cplx c02 = std::conj(u0[i]) * l0[i];
    const cplx c13 = std::conj(u1[i]) * l1[i];
    a3 += 2.0 * (c02.real() - c13.real());
    g5 += 2.0 * (c02.real() + c13.real());
    th += -2.0 * (c02.imag() + c13.imag());
    const cplx x01 = std::conj(u0[i]) * u1[i] + std::conj(l0[i]) * l1[i];
    s1 += 2.0 * x01.real();
    s2 += 2.0 * x01.imag();
    s3 += nu0 - nu1 + nl0 - nl1;
  }
  o.norm = (up + lo) * dz;
  o.beta = (up - lo) * dz;
  o.z = zz * dz;
  o.alpha3 = a3 * dz;
  o.gamma5 = g5 * dz;
  o.S1 = 0.5 * hbar * s1 * dz;
  o.S2 = 0.5 * hbar * s2 * dz;
  o.S3 = 0.5 * hbar * s3 * dz;
  o.theta = th * dz;
  o.phi = o.beta;
  o.theta_yt = std::atan2(o.theta, o.phi);

  const auto plan = FftPlan::get(n);
  std::vector<cplx> buf(n);
  double pp = 0;
  for (int c = 0; c < 4; ++c) {
    const auto comp = psi.component(c);
    std::copy(comp.begin(), comp.end(), buf.begin());
    plan->forward(buf.data());
    for (std::size_t k = 0; k < n; ++k) pp += g.k(k) * std::norm(buf[k]);
  }
  o.p = hbar * pp * dz / static_cast<double>(n);
  o.purity = 1.0;
  return o;
}

Observables measure(const DensityMatrix& rho, double hbar) {
  const Grid& g = rho.grid();
  const std::size_t n = g.size();
  const auto& m = rho.values();
  auto r = [&](int a, std::size_t i, int b, std::size_t j) {
    return m(static_cast<Eigen::Index>(static_cast<std::size_t>(a) * n + i),
             static_cast<Eigen::Index>(static_cast<std::size_t>(b) * n + j));
  };
  Observables o;
  double up = 0, lo = 0, zz = 0, a3 = 0, s1 = 0, s2 = 0, s3 = 0, g5 = 0, th = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d0 = r(0, i, 0, i).real(), d1 = r(1, i, 1, i).real();
    const double d2 = r(2, i, 2, i).real(), d3 = r(3, i, 3, i).real();
    up += d0 + d1;
    lo += d2 + d3;
    zz += g.z(i) * (d0 + d1 + d2 + d3);
    // Tr[M rho] = sum_ab M_ab rho_ba; with rho_ba = <b|rho|a> the pure-state
    // analogue of conj(psi_a) psi_b is rho(b, a).
    const cplx c02 = r(2, i, 0, i);
    const cplx c13 = r(3, i, 1, i);
    a3 += 2.0 * (c02.real() - c13.real());
    g5 += 2.0 * (c02.real() + c13.real());
    th += -2.0 * (c02.imag() + c13.imag());
    const cplx x01 = r(1, i, 0, i) + r(3, i, 2, i);
    s1 += 2.0 * x01.real();
    s2 += 2.0 * x01.imag();
    s3 += d0 - d1 + d2 - d3;
  }
  o.norm = up + lo;
  o.beta = up - lo;
  o.z = zz;
  o.alpha3 = a3;
  o.gamma5 = g5;
  o.S1 = 0.5 * hbar * s1;
  o.S2 = 0.5 * hbar * s2;
  o.S3 = 0.5 * hbar * s3;
  o.theta = th;
  o.phi = o.beta;
  o.theta_yt = std::atan2(o.theta, o.phi);

  // Tr[P rho] per component block: P_c = F^-1 diag(hbar k) F applied to the
  // columns of rho_cc, keeping the diagonal.
  const auto plan = FftPlan::get(n);
  std::vector<cplx> col(n);
  double pp = 0;
  for (int c = 0; c < 4; ++c) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) col[i] = r(c, i, c, j);
      plan->forward(col.data());
      for (std::size_t k = 0; k < n; ++k) col[k] *= g.k(k);
      plan->backward(col.data());
      pp += col[j].real();
    }
  }
  o.p = hbar * pp;
  o.purity = purity(rho);
  return o;
}

std::vector<double> probability_density(const SpinorField& psi) {
  std::vector<double> d(psi.points(), 0.0);
  for (int c = 0; c < 4; ++c) {
    const auto comp = psi.component(c);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += std::norm(comp[i]);
  }
  return d;
}

double edge_probability(const SpinorField& psi, std::size_t cells) {
  const auto d = probability_density(psi);
  const std::size_t n = d.size();
  cells = std::min(cells, n / 2);
  double s = 0;
  for (std::size_t i = 0; i < cells; ++i) s += d[i] + d[n - 1 - i];
  return s * psi.grid().dz();
}

double edge_probability(const DensityMatrix& rho, std::size_t cells) {
  const std::size_t n = rho.grid().size();
  cells = std::min(cells, n / 2);
  double s = 0;
  for (int c = 0; c < 4; ++c) {
    for (std::size_t i = 0; i < cells; ++i) {
      const auto a = static_cast<Eigen::Index>(static_cast<std::size_t>(c) * n + i);
      const auto b = static_cast<Eigen::Index>(static_cast<std::size_t>(c) * n + n - 1 - i);
      s += rho.values()(a, a).real() + rho.values()(b, b).real();
    }
  }
  return s;
}

}  // namespace dfeg
