#pragma once

#include <optional>
#include <vector>

#include "dfeg/core/density.hpp"
#include "dfeg/core/spinor.hpp"
#include "dfeg/core/timeseries.hpp"
#include "dfeg/lindblad/dfeg.hpp"

namespace dfeg {

/// Mirror-side quantities at one instant. boundary_amplitude is
/// |psi(z_m)| / max_z |psi| with |psi|^2 summed over components; j3 is
/// psi^dag alpha3 psi at the cell nearest the mirror.
struct BoundarySample {
  double mirror_position = 0.0;
  double boundary_amplitude = 0.0;
  double j3_at_mirror = 0.0;
  double peak_flux = 0.0;  // max_z |psi^dag alpha3 psi|
};

BoundarySample boundary_sample(const SpinorField& psi, const MirrorConfig& mirror, double t);
BoundarySample boundary_sample(const DensityMatrix& rho, const MirrorConfig& mirror, double t);

/// J3(z) = psi^dag alpha3 psi per grid point.
std::vector<double> probability_current(const SpinorField& psi);

/// Probability on cells with z <= z_cut.
double probability_below(const SpinorField& psi, double z_cut);
double probability_below(const DensityMatrix& rho, double z_cut);

/// Columns of a bounce run: standard_columns() plus these three.
const std::vector<std::string>& bounce_columns();

struct BounceRun {
  TimeSeries series;
  std::vector<double> turning_times;     // extrema of <z>
  std::vector<double> auto_t;            // autocorrelation stamps (pure runs)
  std::vector<cplx> autocorrelation;     // <psi(0)|psi(t)>
  double peak_flux = 0.0;                // max over records and z of |J3|
  double max_s3_drift = 0.0;
  double final_below_mirror = 0.0;       // probability left of the mirror at the end
  std::optional<SpinorField> final_state;
  std::optional<DensityMatrix> final_density;
};

/// Extrema of z(t) separated by at least min_excursion in z.
std::vector<double> turning_points(const std::vector<double>& t, const std::vector<double>& z,
                                   double min_excursion);

/// Conservative run: Strang stepping of H_g with the mirror folded into the
/// beta-diagonal potential. cfg.mirror must be set.
BounceRun qbounce_run(const SpinorField& psi0, const HamiltonianConfig& cfg, double dt,
                      std::size_t n_steps, std::size_t record_every,
                      const PropagateOptions& options = {});

/// Dense run (conservative or entropic) through evolve_dense; cfg.mirror must be set.
BounceRun qbounce_run(const DensityMatrix& rho0, const HamiltonianConfig& cfg,
                      const DfegParams& params, LindbladMode mode, double dt,
                      std::size_t n_steps, const DenseOptions& options = {});

/// max_t |J3(z_m, t)| against the peak flux of the run.
struct CurrentCheck {
  double max_at_mirror = 0.0;
  double peak_flux = 0.0;
  double ratio = 0.0;
};

CurrentCheck surface_current_check(const BounceRun& run);

/// Incident-packet scenario shared by the Dirichlet sweep.
/// Slow, broad packet started 7 widths above the mirror: the evanescent
/// current scales like (p/mc)^2/(kappa width), and any initial overlap with
/// the step shows up directly in J3.
struct ReflectionScenario {
  std::size_t n_points = 16384;
  double z_min = -40.0;
  double z_max = 40.0;
  double z0 = 14.0;
  double p0 = -0.5;
  double width = 2.0;
  double dt = 0.005;
  double t_end = 45.0;
  std::size_t record_every = 10;
};

struct DirichletPoint {
  double v0 = 0.0;                   // mirror height in units of m c^2
  double max_boundary_amplitude = 0.0;
  double max_j3_ratio = 0.0;
  double transmitted = 0.0;          // final probability left of the mirror
};

/// Reflects a positive-energy packet off a static mass-step mirror at z = 0
/// for each V0/(m c^2) in v0_over_mc2 (0 is the free control).
std::vector<DirichletPoint> dirichlet_limit_check(const HamiltonianConfig& cfg,
                                                  const std::vector<double>& v0_over_mc2,
                                                  const ReflectionScenario& scenario = {});

/// Peaks of the Blackman-windowed spectrum |sum_t A(t) e^{i E t/hbar}| of an
/// autocorrelation, after removing the rest-energy phase, on [e_min, e_max].
/// Peak energies are refined by parabolic interpolation; sorted ascending.
struct SpectrumPeak {
  double energy = 0.0;
  double height = 0.0;
};

std::vector<SpectrumPeak> autocorrelation_peaks(const std::vector<double>& t,
                                                const std::vector<cplx>& a, double rest_energy,
                                                double hbar, double e_min, double e_max,
                                                double rel_height = 0.05);

}  // namespace dfeg
