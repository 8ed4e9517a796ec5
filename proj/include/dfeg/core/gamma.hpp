#pragma once

#include <Eigen/Dense>

namespace dfeg {

/// Dirac-representation gamma matrices with metric signature (+,-,-,-).
///
/// Component order is (upper spin-up, upper spin-down, lower spin-up, lower
/// spin-down). Every entry is 0, +-1 or +-i, so the algebraic identities hold
/// exactly in floating point.
struct GammaSet {
  Eigen::Matrix4cd gamma0, gamma1, gamma2, gamma3, gamma5;
  Eigen::Matrix4cd alpha1, alpha2, alpha3;
  Eigen::Matrix4cd beta;
  Eigen::Matrix4cd Sigma1, Sigma2, Sigma3;

  const Eigen::Matrix4cd& gamma(int mu) const;
  const Eigen::Matrix4cd& alpha(int i) const;
  const Eigen::Matrix4cd& Sigma(int i) const;
  /// S_i = (hbar/2) Sigma_i.
  Eigen::Matrix4cd spin(int i, double hbar) const;
};

GammaSet build_gamma_set();

/// Process-wide immutable instance.
const GammaSet& gammas();

/// Minkowski metric diag(1,-1,-1,-1).
double eta(int mu, int nu);

}  // namespace dfeg
