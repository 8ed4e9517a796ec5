#include "dfeg/spectral/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dfeg/core/quadrature.hpp"

namespace dfeg {

namespace {

// Integrand drops below 1e-18 of its peak past this log offset.
constexpr double kTruncLog = -45.0;

void check_window(cplx nu, double x) {
  if (!(std::abs(nu.imag()) <= kBesselMaxImagOrder) ||
      !(std::abs(nu.real()) <= kBesselMaxRealOrder) || !(x >= kBesselMinArg) ||
      !(x <= kBesselMaxArg)) {
    std::ostringstream os;
    os << "bessel_k: (nu=" << nu.real() << "+" << nu.imag() << "i, x=" << x
       << ") outside the quadrature window";
    throw ConfigError(os.str());
  }
}

}  // namespace

cplx ScaledComplex::value() const { return mantissa * std::exp(log_scale); }

ScaledComplex bessel_k_scaled(cplx nu, double x, double rel_tol) {
  check_window(nu, x);
  const double om = nu.imag();
  const double re = nu.real();
  double theta = 0.0;
  if (om != 0.0) {
    const double dmin = std::min(kPi / 2, 4.0 / std::abs(om));
    const double saddle = std::asin(std::min(std::abs(om) / x, 1.0));
    theta = std::copysign(std::min(saddle, kPi / 2 - dmin), om);
  }
  const double a = x * std::cos(theta);  // decay rate along the shifted line

  // Re of the exponent along Im w = theta: -a cosh s + re s - om theta.
  auto log_mag = [&](double s) { return -a * std::cosh(s) + re * s - om * theta; };
  const double s_peak = std::asinh(re / a);
  const double peak = log_mag(s_peak);

  auto edge = [&](double dir) {
    double step = 0.5;
    double s = s_peak;
    while (log_mag(s + dir * step) - peak > kTruncLog) step *= 2.0;
    double lo = 0.0, hi = step;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (log_mag(s + dir * mid) - peak > kTruncLog) lo = mid; else hi = mid;
    }
    return s + dir * hi;
  };
  const double s_lo = edge(-1.0);
  const double s_hi = edge(1.0);

  const cplx shift(0.0, theta);
  auto f = [&](double s) {
    const cplx w = cplx(s, 0.0) + shift;
    return std::exp(-x * std::cosh(w) + nu * w - peak);
  };
  // Pre-split by the local oscillation count so the adaptive pass starts resolved.
  const double rate = std::abs(om) + x * std::abs(std::sin(theta)) *
                                         std::max(std::cosh(s_lo), std::cosh(s_hi));
  const int pieces = std::clamp(static_cast<int>((s_hi - s_lo) * rate / (2 * kPi)) + 1, 1, 4000);
  cplx total{};
  const double width = (s_hi - s_lo) / pieces;
  for (int k = 0; k < pieces; ++k) {
    const double a0 = s_lo + k * width;
    auto r = integrate_adaptive<cplx>(f, a0, a0 + width, rel_tol, 1e-17, 200);
    total += r.value;
  }
  // dw = ds along the shifted line; 1/2 from the symmetric form of the integral.
  return {0.5 * total, peak};
}

cplx bessel_k_complex_order(cplx nu, double x) { return bessel_k_scaled(nu, x).value(); }

ScaledComplex hankel1_imaginary_arg(cplx nu, double x) {
  ScaledComplex k = bessel_k_scaled(nu, x);
  // H = (2/(i pi)) e^{-i nu pi/2} K; split e^{-i nu pi/2} into modulus and phase.
  const cplx e = -kI * nu * (kPi / 2);
  const cplx factor = (2.0 / (kI * kPi)) * std::exp(cplx(0.0, e.imag()));
  return {factor * k.mantissa, k.log_scale + e.real()};
}

double bessel_j_real(double nu, double x) {
  if (!(x > 0.0)) throw ConfigError("bessel_j_real: x must be positive");
  const int pieces = std::max(1, static_cast<int>(x / 4.0));
  double first = 0.0;
  const double w = kPi / pieces;
  for (int k = 0; k < pieces; ++k) {
    auto r = integrate_adaptive<double>(
        [&](double t) { return std::cos(nu * t - x * std::sin(t)); }, k * w, (k + 1) * w,
        1e-14, 1e-17, 200);
    first += r.value;
  }
  double second = 0.0;
  const double s = std::sin(nu * kPi);
  if (s != 0.0) {
    // exp(-x sinh t - nu t) falls below 1e-20 once x sinh t + nu t > 46.
    double t_max = 1.0;
    while (x * std::sinh(t_max) + nu * t_max < 46.0) t_max *= 2.0;
    auto r = integrate_adaptive<double>(
        [&](double t) { return std::exp(-x * std::sinh(t) - nu * t); }, 0.0, t_max, 1e-14,
        1e-18, 400);
    second = r.value;
  }
  return first / kPi - s / kPi * second;
}

double airy_ai_negative(double a) {
  if (a < 0.0) throw ConfigError("airy_ai_negative: a must be non-negative");
  if (a == 0.0) return 0.355028053887817239260063186004183;
  const double zeta = 2.0 / 3.0 * a * std::sqrt(a);
  return std::sqrt(a) / 3.0 * (bessel_j_real(1.0 / 3.0, zeta) + bessel_j_real(-1.0 / 3.0, zeta));
}

}  // namespace dfeg
