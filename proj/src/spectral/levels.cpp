#include "dfeg/spectral/levels.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include "json.hpp"
#include <sstream>

#include "dfeg/core/timeseries.hpp"
#include "dfeg/core/types.hpp"
#include "dfeg/spectral/bessel.hpp"

namespace dfeg {

SpectralParams SpectralParams::for_mu0(double mu0, int s) {
  SpectralParams p;
  p.mu = mu0;
  p.mu0 = mu0;
  p.s = s;
  p.units.g = p.units.mass * std::pow(p.units.c, 3) / (p.units.hbar * mu0);
  return p;
}

void SpectralParams::validate() const {
  if (!(mu > 0.0) || !(mu0 > 0.0)) throw ConfigError("spectral: mu and mu0 must be positive");
  if (s != 1 && s != -1) throw ConfigError("spectral: s must be +1 or -1");
  units.validate();
}

double SpectralParams::energy(double omega) const { return units.hbar * units.g * omega / units.c; }

AiryZeros airy_zero_magnitudes(int n_max) {
  if (n_max < 1 || n_max > 50) throw ConfigError("airy_zero_magnitudes: n_max must be in [1, 50]");
  AiryZeros z;
  for (int n = 1; n <= n_max; ++n) {
    const double seed = std::pow(3.0 * kPi * (4.0 * n - 1.0) / 8.0, 2.0 / 3.0);
    // The seed is within 0.02 of the zero and zeros are > 1 apart.
    double lo = seed - 0.25, hi = seed + 0.25;
    double flo = airy_ai_negative(lo);
    const double fhi = airy_ai_negative(hi);
    if (flo * fhi > 0.0) throw NumericalError("airy_zero_magnitudes: seed bracket failed");
    while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      const double mid = 0.5 * (lo + hi);
      const double fm = airy_ai_negative(mid);
      if (fm == 0.0) { lo = hi = mid; break; }
      if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
    }
    z.a.push_back(0.5 * (lo + hi));
  }
  return z;
}

double quantization_residual(double omega, const SpectralParams& params) {
  params.validate();
  const ScaledComplex h = hankel1_imaginary_arg(cplx(0.5, omega), params.mu);
  const double scale = std::exp(h.log_scale);
  return scale * (h.mantissa.real() + params.s * h.mantissa.imag());
}

namespace {

std::vector<double> asymptotic_from(double mu0, const AiryZeros& az, int n_max) {
  std::vector<double> out;
  const double c13 = std::cbrt(mu0);
  const double two13 = std::cbrt(2.0);
  for (int n = 0; n < n_max; ++n) {
    const double a = az(n + 1);
    out.push_back(mu0 - 0.5 + a * c13 / two13 + a * a / 60.0 * two13 / c13 +
                  a / 6.0 / two13 / (c13 * c13) +
                  (1.0 / 70.0 - a * a * a / 700.0 - 1.0 / 12.0) / mu0);
  }
  return out;
}

}  // namespace

std::vector<double> asymptotic_levels(double mu0, int n_max) {
  if (!(mu0 > 0.0)) throw ConfigError("asymptotic_levels: mu0 must be positive");
  if (mu0 < 10.0) std::fprintf(stderr, "warning: asymptotic_levels at mu0=%g < 10\n", mu0);
  return asymptotic_from(mu0, airy_zero_magnitudes(n_max + 1), n_max);
}

LevelTable find_levels(const SpectralParams& params, int n_max) {
  params.validate();
  if (params.mu < 10.0) throw ConfigError("find_levels: requires mu >= 10");
  const AiryZeros az = airy_zero_magnitudes(n_max + 1);
  const std::vector<double> seeds = asymptotic_from(params.mu, az, n_max);
  const std::vector<double> asym = asymptotic_from(params.mu0, az, n_max);
  const double spacing_unit = std::cbrt(params.mu) / std::cbrt(2.0);

  LevelTable table;
  table.params = params;
  for (int n = 0; n < n_max; ++n) {
    const double gap = az(n + 2) - az(n + 1);
    const double half = std::max(1.0, 3.0 * spacing_unit * gap);
    const double step = std::min(0.5, spacing_unit * gap / 8.0);
    const int steps = static_cast<int>(std::ceil(2.0 * half / step));
    const double lo = seeds[n] - half;
    LevelRow row;
    row.n = n;
    row.omega_asym = asym[n];
    row.omega_root = std::numeric_limits<double>::quiet_NaN();
    // Scan for sign changes, then bisect only the bracket nearest the seed.
    double best = std::numeric_limits<double>::infinity();
    double ba = 0.0, bb = 0.0, bfa = 0.0;
    double x0 = lo;
    double f0 = quantization_residual(x0, params);
    for (int k = 1; k <= steps; ++k) {
      const double x1 = lo + 2.0 * half * k / steps;
      const double f1 = quantization_residual(x1, params);
      if (f0 == 0.0 || f0 * f1 < 0.0) {
        ++row.brackets;
        const double d = std::abs(0.5 * (x0 + x1) - seeds[n]);
        if (d < best) {
          best = d;
          ba = x0;
          bb = x1;
          bfa = f0;
        }
      }
      x0 = x1;
      f0 = f1;
    }
    if (row.brackets > 0) {
      while (bb - ba > 1e-9 && bfa != 0.0) {
        const double m = 0.5 * (ba + bb);
        const double fm = quantization_residual(m, params);
        if (fm == 0.0) { ba = bb = m; break; }
        if ((fm > 0.0) == (bfa > 0.0)) { ba = m; bfa = fm; } else { bb = m; }
      }
      row.omega_root = bfa == 0.0 ? ba : 0.5 * (ba + bb);
      row.found = true;
    }
    if (row.found) {
      row.rel_gap = std::abs(row.omega_root - row.omega_asym) / row.omega_root;
      row.energy = params.energy(row.omega_root);
    } else {
      row.rel_gap = std::numeric_limits<double>::quiet_NaN();
      row.energy = params.energy(row.omega_asym);
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string LevelTable::to_csv() const {
  std::ostringstream os;
  os << "n,Omega_root,Omega_asym,rel_gap,E_n_units\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format_double(r.omega_root) << ',' << format_double(r.omega_asym) << ','
       << format_double(r.rel_gap) << ',' << format_double(r.energy) << '\n';
  }
  return os.str();
}

std::string LevelTable::to_json() const {
  nlohmann::ordered_json j;
  j["parameters"] = {{"mu", params.mu},
                     {"mu0", params.mu0},
                     {"s", params.s},
                     {"hbar", params.units.hbar},
                     {"mass", params.units.mass},
                     {"c", params.units.c},
                     {"g", params.units.g},
                     {"units", to_string(params.units.units)}};
  j["methods"] = {
      {"Omega_root", "bisection on Re H + s Im H, H via contour-shifted K quadrature"},
      {"Omega_asym", "large-mu0 expansion with Airy zero magnitudes a_{n+1}"},
      {"E_n_units", "hbar g Omega / c, from Omega_root when found"}};
  auto& levels = j["levels"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json l;
    l["n"] = r.n;
    l["found"] = r.found;
    l["brackets"] = r.brackets;
    l["Omega_root"] = r.found ? nlohmann::ordered_json(r.omega_root) : nullptr;
    l["Omega_asym"] = r.omega_asym;
    l["rel_gap"] = r.found ? nlohmann::ordered_json(r.rel_gap) : nullptr;
    l["E_n_units"] = r.energy;
    levels.push_back(l);
  }
  return j.dump(2) + "\n";
}

TransitionFrequencies transition_frequencies(const HamiltonianConfig& cfg, int n, int n_prime) {
  if (!(cfg.hbar > 0.0) || !(cfg.mass > 0.0) || !(cfg.c > 0.0) || !(cfg.g >= 0.0)) {
    throw ConfigError("transition_frequencies: constants must be positive");
  }
  TransitionFrequencies t;
  if (cfg.g == 0.0) return t;
  const AiryZeros az = airy_zero_magnitudes(std::max(n, n_prime) + 1);
  const double a = az(n + 1), ap = az(n_prime + 1);
  const double m = cfg.mass, g = cfg.g, hb = cfg.hbar, c = cfg.c;
  t.x0 = std::cbrt(hb * hb / (2.0 * m * m * g));
  t.omega_nr = m * g * t.x0 / hb * (ap - a);
  t.delta_omega = m * g * g * t.x0 * t.x0 / (30.0 * hb * c * c) * (ap * ap - a * a) +
                  g * g * t.x0 / (6.0 * c * c * c) * (ap - a);
  t.omega_d = t.omega_nr + t.delta_omega;
  return t;
}

double normalization_constant(double omega, double kappa, NormalizationFamily family) {
  if (!(omega >= 0.0) || !(kappa > 0.0)) {
    throw ConfigError("normalization_constant: need omega >= 0 and kappa > 0");
  }
  const double ch = std::cosh(kPi * omega);
  const double inner = family == NormalizationFamily::hankel
                           ? kappa * ch / (8.0 * std::exp(kPi * omega))
                           : kappa * ch / (2.0 * kPi * kPi);
  return std::sqrt(inner) / (2.0 * kPi);
}

NeutronScaleReport neutron_scale_report(const HamiltonianConfig& cfg) {
  cfg.validate();
  NeutronScaleReport r;
  r.mu0 = cfg.mass * cfg.c / cfg.hbar * (cfg.c * cfg.c / cfg.g);
  r.log10_mu0 = std::log10(r.mu0);
  const TransitionFrequencies t = transition_frequencies(cfg, 0, 1);
  r.x0 = t.x0;
  r.ground_energy_nr = cfg.mass * cfg.g * t.x0 * airy_zero_magnitudes(1)(1);
  r.delta_omega_01 = t.delta_omega;
  r.delta_nu_01 = t.delta_omega / (2.0 * kPi);
  r.root_finding_feasible = r.mu0 <= kBesselMaxImagOrder;
  r.note = r.root_finding_feasible
               ? "mu0 inside the quadrature window; root finding available"
               : "mu0 far outside the quadrature window; the asymptotic expansion is authoritative";
  return r;
}

std::string NeutronScaleReport::to_json() const {
  nlohmann::ordered_json j;
  j["mu0"] = mu0;
  j["log10_mu0"] = log10_mu0;
  j["x0_m"] = x0;
  j["ground_energy_nr_J"] = ground_energy_nr;
  j["delta_omega_01_rad_per_s"] = delta_omega_01;
  j["delta_nu_01_Hz"] = delta_nu_01;
  j["root_finding_feasible"] = root_finding_feasible;
  j["note"] = note;
  return j.dump(2) + "\n";
}

}  // namespace dfeg
