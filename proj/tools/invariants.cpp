#include "invariants.hpp"

#include <cmath>
#include <sstream>

#include "dfeg/core/density.hpp"
#include "dfeg/core/observables.hpp"
#include "dfeg/core/packet.hpp"
#include "dfeg/core/rng.hpp"
#include "dfeg/core/timeseries.hpp"
#include "dfeg/dynamics/dirac.hpp"
#include "dfeg/lindblad/dfeg.hpp"
#include "dfeg/nonrel/nonrel.hpp"
#include "dfeg/spectral/bessel.hpp"
#include "dfeg/spectral/levels.hpp"

namespace dfeg::cli {

namespace {

SpinorField random_spinor(const Grid& grid, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  SpinorField psi(grid);
  for (cplx& v : psi.values()) v = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  return psi.normalized();
}

InvariantResult below(std::string name, double value, double limit) {
  return {std::move(name), value, limit, std::isfinite(value) && value < limit};
}

double max_column_drift(const TimeSeries& s, const char* col) {
  const auto v = s.column(col);
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x - v.front()));
  return d;
}

}  // namespace

std::vector<InvariantResult> run_invariant_suite() {
  std::vector<InvariantResult> out;
  HamiltonianConfig cfg;
  cfg.g = 0.5;
  const Grid grid(256, -10.0, 10.0);
  const SpinorField r = random_spinor(grid, 7);

  out.push_back(below("kinetic_step_unitarity",
                      std::abs(kinetic_step(r, 0.1, cfg).norm() - 1.0), 1e-12));
  {
    const SpinorField p = apply_energy_projector(r, 1, cfg);
    const SpinorField pp = apply_energy_projector(p, 1, cfg);
    const SpinorField m = apply_energy_projector(r, -1, cfg);
    std::vector<cplx> sum(r.storage().size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = p.storage()[i] + m.storage()[i];
    out.push_back(below("projector_idempotence", pp.l2_distance(p), 1e-12));
    out.push_back(below("projector_completeness", SpinorField(grid, sum).l2_distance(r), 1e-12));
  }
  {
    const SpinorField cc = charge_conjugate(charge_conjugate(r));
    out.push_back(below("charge_conjugation_involution", std::abs(1.0 - std::abs(r.inner(cc))), 1e-12));
  }
  {
    const SpinorField psi = project_energy(make_gaussian_packet(grid, 0.0, 0.0, 1.0), 1, cfg);
    const Trajectory t = propagate(psi, cfg, 0.01, 2000, 20);
    out.push_back(below("norm_drift_2000_steps", max_column_drift(t.series, "norm"), 1e-9));
    out.push_back(below("spin_s3_drift", max_column_drift(t.series, "S3"), 1e-9));
  }
  {
    const Grid g2(2048, -10.0, 14.0);
    const SpinorField psi = project_energy(make_gaussian_packet(g2, 2.0, 0.0, 0.5), 1, cfg);
    const Trajectory t = propagate(psi, cfg, 1e-3, 1000, 1);
    const EhrenfestResiduals e = ehrenfest_residuals(t, cfg);
    out.push_back(below("ehrenfest_position", e.position, 1e-4));
    out.push_back(below("ehrenfest_momentum", e.momentum, 1e-4));
  }
  {
    const Grid g3(64, -10.0, 10.0);
    const DfegParams params = DfegParams::make(100.0, cfg);
    const ConstraintResiduals c = verify_jump_constraints(params, g3, cfg);
    out.push_back(below("jump_constraint_momentum", c.momentum, 1e-10));
    out.push_back(below("jump_constraint_position", c.position, 1e-10));
    out.push_back(below("spin_dissipator", spin_dissipator_check(params, g3, cfg), 1e-12));

    const SpinorField psi = project_energy(make_gaussian_packet(g3, 0.0, 0.0, 0.8), 1, cfg);
    DenseOptions opts;
    opts.integrator = DenseIntegrator::strang_exact;
    const DenseRun run =
        evolve_dense(DensityMatrix::from_pure(psi), cfg, params, 0.1, 10, LindbladMode::full, opts);
    out.push_back(below("dense_trace_drift", run.max_trace_drift, 1e-9));
    out.push_back(below("dense_negative_eigenvalue", std::max(0.0, -run.min_eigenvalue), 1e-8));
    out.push_back(below("dense_purity_increase", run.max_purity_increase, 1e-10));
  }
  {
    const double k = bessel_k_complex_order(cplx(0.5, 0.0), 1.0).real();
    const double exact = std::sqrt(kPi / 2.0) * std::exp(-1.0);
    out.push_back(below("bessel_k_half_order", std::abs(k - exact) / exact, 1e-10));
    const AiryZeros z = airy_zero_magnitudes(3);
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n) worst = std::max(worst, std::abs(airy_ai_negative(z(n))));
    out.push_back(below("airy_zero_residual", worst, 1e-12));
  }
  {
    const auto v = fw_spin_orbit_vector({0.0, 0.0, -0.5}, {0.0, 0.0, 1.3});
    out.push_back(below("fw_spin_orbit_1d", std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]),
                        1e-15));
    const Grid g4(64, -6.0, 6.0);
    const DfegParams params = DfegParams::make(100.0, cfg);
    const ScalarField phi = make_scalar_gaussian(g4, 0.0, 0.0, 0.8);
    Eigen::VectorXcd v4(64);
    for (Eigen::Index i = 0; i < 64; ++i) {
      v4(i) = phi.values()[static_cast<std::size_t>(i)] * std::sqrt(g4.dz());
    }
    const Eigen::MatrixXcd rho = v4 * v4.adjoint();
    const NonrelDenseRun run =
        evolve_nonrel_dense(rho, g4, cfg, params, 0.1, 10, NonrelMode::full);
    out.push_back(below("nonrel_trace_drift", std::abs(run.final_state.trace().real() - 1.0),
                        1e-12));
  }
  return out;
}

std::string invariants_csv(const std::vector<InvariantResult>& results) {
  std::ostringstream os;
  os << "name,value,limit,pass\n";
  for (const auto& r : results) {
    os << r.name << ',' << format_double(r.value) << ',' << format_double(r.limit) << ','
       << (r.pass ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace dfeg::cli
