#pragma once

#include "dfeg/core/types.hpp"

namespace dfeg {

/// Evaluation window of the K quadrature.
inline constexpr double kBesselMaxImagOrder = 500.0;
inline constexpr double kBesselMaxRealOrder = 10.0;
inline constexpr double kBesselMinArg = 1e-3;
inline constexpr double kBesselMaxArg = 700.0;

/// K_nu(x) = mantissa * exp(log_scale). The mantissa is O(1) relative to the
/// largest integrand value on the contour, so values far below the double range
/// can still be compared.
struct ScaledComplex {
  cplx mantissa;
  double log_scale = 0.0;

  cplx value() const;
};

/// K_nu(x) from (1/2) * integral over the real line of exp(-x cosh w + nu w),
/// with the contour shifted to Im w = theta through the saddle. Throws
/// ConfigError outside |Im nu| <= 500, |Re nu| <= 10, 1e-3 <= x <= 700.
ScaledComplex bessel_k_scaled(cplx nu, double x, double rel_tol = 1e-12);

cplx bessel_k_complex_order(cplx nu, double x);

/// H^(1)_nu(i x) through K_nu(x) = (i pi/2) e^{i nu pi/2} H^(1)_nu(i x).
ScaledComplex hankel1_imaginary_arg(cplx nu, double x);

/// J_nu(x) for real nu, x > 0 from the Schlafli integral.
double bessel_j_real(double nu, double x);

/// Ai(-a) for a >= 0 via J_{+-1/3}. Ai(0) is returned in closed form.
double airy_ai_negative(double a);

}  // namespace dfeg
