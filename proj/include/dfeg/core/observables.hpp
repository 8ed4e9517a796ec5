#pragma once

#include <vector>

#include "dfeg/core/density.hpp"
#include "dfeg/core/spinor.hpp"

namespace dfeg {

/// Expectation values recorded along every run. Integrals are not divided by
/// the norm. Theta = i psibar gamma5 psi, Phi = psibar psi, theta_yt =
/// atan2(Theta, Phi).
struct Observables {
  double norm = 0, beta = 0, z = 0, p = 0, alpha3 = 0;
  double S1 = 0, S2 = 0, S3 = 0, gamma5 = 0;
  double theta = 0, phi = 0, theta_yt = 0;
  double purity = 1.0;

  /// Row in standard_columns() order.
  std::vector<double> row(double t) const;
};

Observables measure(const SpinorField& psi, double hbar);
Observables measure(const DensityMatrix& rho, double hbar);

/// Position-space density sum_c |psi_c(z_i)|^2.
std::vector<double> probability_density(const SpinorField& psi);

/// Probability within `cells` samples of either edge.
double edge_probability(const SpinorField& psi, std::size_t cells = 5);
double edge_probability(const DensityMatrix& rho, std::size_t cells = 5);

}  // namespace dfeg
