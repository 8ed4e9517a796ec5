#pragma once

#include <string>
#include <vector>

#include "dfeg/core/config.hpp"

namespace dfeg {

/// Bouncing-fermion spectral problem in Rindler coordinates.
///
/// mu = kappa u0 and mu0 = ell u0 are dimensionless; for transverse momentum
/// k = 0 they coincide. Omega is the dimensionless Rindler frequency and the
/// energy is E = hbar g Omega / c in the units of `units`.
struct SpectralParams {
  double mu = 100.0;
  double mu0 = 100.0;
  int s = +1;
  HamiltonianConfig units;

  /// k = 0 parameters with natural units scaled so that mu0 = m c^3/(hbar g).
  static SpectralParams for_mu0(double mu0, int s = +1);
  /// Throws ConfigError unless mu > 0, mu0 > 0, s = +-1.
  void validate() const;
  double energy(double omega) const;
};

/// Magnitudes a_n of the zeros of Ai, so Ai(-a_n) = 0 and a_1 < a_2 < ...
/// (the zeros themselves are negative).
struct AiryZeros {
  std::vector<double> a;  // a[0] = a_1

  double operator()(int n) const { return a.at(static_cast<size_t>(n - 1)); }
  int size() const { return static_cast<int>(a.size()); }
};

/// Seeds (3 pi (4n-1)/8)^{2/3} refined by bisection on Ai(-a). n_max <= 50.
AiryZeros airy_zero_magnitudes(int n_max);

/// Re H^(1)_{i Omega + 1/2}(i mu) + s Im H^(1)_{i Omega + 1/2}(i mu).
double quantization_residual(double omega, const SpectralParams& params);

/// Omega_n for n = 0 .. n_max-1 from the large-mu0 expansion, which uses a_{n+1}.
/// Prints a warning to stderr when mu0 < 10.
std::vector<double> asymptotic_levels(double mu0, int n_max);

struct LevelRow {
  int n = 0;
  double omega_root = 0.0;  // NaN when no bracket was found
  double omega_asym = 0.0;
  double rel_gap = 0.0;
  double energy = 0.0;
  bool found = false;
  int brackets = 0;  // sign changes seen in the search window
};

struct LevelTable {
  SpectralParams params;
  std::vector<LevelRow> rows;

  /// Columns n, Omega_root, Omega_asym, rel_gap, E_n_units.
  std::string to_csv() const;
  std::string to_json() const;
};

/// Root-finding levels n = 0 .. n_max-1. Each level is searched in
/// seed +- max(1, 3 * 2^{-1/3} mu0^{1/3} (a_{n+2} - a_{n+1})), all sign changes
/// are bisected to |dOmega| < 1e-8, and the root nearest the seed is kept.
/// A missing root is reported in the row, not thrown. Requires mu >= 10.
LevelTable find_levels(const SpectralParams& params, int n_max);

struct TransitionFrequencies {
  double x0 = 0.0;           // (hbar^2/(2 m^2 g))^{1/3}
  double omega_nr = 0.0;     // (m g x0/hbar)(a_{n'+1} - a_{n+1})
  double omega_d = 0.0;      // omega_nr plus the relativistic corrections
  double delta_omega = 0.0;  // the relativistic corrections alone, rad/s
};

/// Transition n -> n' for the constants in cfg (SI in practice).
TransitionFrequencies transition_frequencies(const HamiltonianConfig& cfg, int n, int n_prime);

enum class NormalizationFamily { hankel, bessel_k };

double normalization_constant(double omega, double kappa, NormalizationFamily family);

struct NeutronScaleReport {
  double mu0 = 0.0;
  double log10_mu0 = 0.0;
  double x0 = 0.0;
  double ground_energy_nr = 0.0;  // m g x0 a_1
  double delta_omega_01 = 0.0;    // rad/s
  double delta_nu_01 = 0.0;       // Hz
  bool root_finding_feasible = false;
  std::string note;

  std::string to_json() const;
};

/// mu0 = (m c/hbar)(c^2/g) with the transition corrections for 0 -> 1.
NeutronScaleReport neutron_scale_report(const HamiltonianConfig& cfg);

}  // namespace dfeg
