// Scenario runner: one experiment family per invocation, CSV outputs plus a
// manifest.json describing the run.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "dfeg/core/density.hpp"
#include "dfeg/core/packet.hpp"
#include "dfeg/dynamics/dirac.hpp"
#include "dfeg/lindblad/dfeg.hpp"
#include "dfeg/nonrel/nonrel.hpp"
#include "dfeg/qbounce/bounce.hpp"
#include "dfeg/spectral/levels.hpp"
#include "invariants.hpp"
#include "run_config.hpp"

#ifndef DFEG_VERSION
#define DFEG_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace dfeg;
using namespace dfeg::cli;

namespace {

struct Flags {
  std::string config;
  std::string preset;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string units;
  // spectrum
  std::optional<double> mu0;
  std::optional<std::size_t> n;
  std::optional<int> s;
  // nonrel-compare
  std::optional<std::string> scenario;
  std::vector<double> c_list;
};

class Run {
 public:
  explicit Run(fs::path out) : out_(std::move(out)) {}

  void write(const std::string& name, const std::string& text) {
    write_text_file((out_ / name).string(), text);
    files_.push_back(name);
  }
  void check(const std::string& name, double value, double limit) {
    checks_.push_back({name, value, limit, std::isfinite(value) && value < limit});
  }
  void add_checks(const std::vector<InvariantResult>& r) {
    checks_.insert(checks_.end(), r.begin(), r.end());
  }
  bool all_pass() const {
    for (const auto& c : checks_) {
      if (!c.pass) return false;
    }
    return true;
  }
  void note(const std::string& key, Json value) { info_[key] = std::move(value); }

  void write_manifest(const Json& config, const std::string& status, int exit_code,
                      double seconds, int threads) const {
    Json m;
    m["tool"] = "dfeg_cli";
    m["version"] = DFEG_VERSION;
    m["command"] = config.value("command", "");
    m["status"] = status;
    m["exit_code"] = exit_code;
    m["units"] = config.value("units", "natural");
    m["seed"] = config.value("seed", 0);
    m["threads"] = threads;
    m["wall_clock_seconds"] = seconds;
    m["config"] = config;
    Json files = Json::array();
    for (const auto& f : files_) {
      std::error_code ec;
      const auto bytes = fs::file_size(out_ / f, ec);
      files.push_back({{"path", f}, {"bytes", ec ? 0 : bytes}});
    }
    m["outputs"] = files;
    Json checks = Json::array();
    std::size_t passed = 0;
    for (const auto& c : checks_) {
      passed += c.pass ? 1 : 0;
      checks.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
    }
    m["invariants"] = {{"passed", passed}, {"failed", checks_.size() - passed}, {"checks", checks}};
    if (!info_.empty()) m["info"] = info_;
    write_text_file((out_ / "manifest.json").string(), m.dump(2) + "\n");
  }

 private:
  fs::path out_;
  std::vector<std::string> files_;
  std::vector<InvariantResult> checks_;
  Json info_ = Json::object();
};

std::size_t step_count(double t_end, double dt) {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

std::optional<MirrorConfig> mirror_config(const RunConfig& cfg) {
  if (!cfg.mirror) return std::nullopt;
  MirrorConfig m;
  m.model = cfg.mirror->model == "delta_term" ? MirrorModel::delta_term : MirrorModel::mass_step;
  m.v0 = cfg.mirror->v0 * cfg.ham.rest_energy();
  m.z_mirror = cfg.mirror->z_mirror;
  m.amplitude = cfg.mirror->amplitude;
  m.omega = cfg.mirror->omega;
  m.reg_width = cfg.mirror->reg_width;
  return m;
}

LindbladMode lindblad_mode(const std::string& s) {
  if (s == "expanded") return LindbladMode::expanded;
  if (s == "conservative") return LindbladMode::conservative;
  return LindbladMode::full;
}

double drift(const TimeSeries& s, const char* col) {
  const auto v = s.column(col);
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x - v.front()));
  return d;
}

std::string acceleration_csv(const Trajectory& t) {
  const Series a = acceleration_series(t);
  TimeSeries ts({"t", "a3"});
  for (std::size_t i = 0; i < a.t.size(); ++i) ts.push_row({a.t[i], a.value[i]});
  return ts.to_csv();
}

void run_free_fall(const RunConfig& cfg, Run& run) {
  const Grid grid(cfg.grid.n_points, cfg.grid.z_min, cfg.grid.z_max);
  const auto& p = cfg.packet;
  const SpinorField seed = make_gaussian_packet(grid, p.z0, p.p0, p.width, cfg.ham.hbar);
  const SpinorField matter = project_energy(seed, 1, cfg.ham);
  const SpinorField antimatter =
      p.antimatter == "negative" ? project_energy(seed, -1, cfg.ham) : charge_conjugate(matter);
  const SpinorField mixed = make_gaussian_packet(grid, p.z0_mixed, p.p0, p.width, cfg.ham.hbar);
  const std::size_t n_steps = step_count(cfg.time.t_end, cfg.time.dt);
  for (const auto& [name, psi] : {std::pair{"matter", &matter}, std::pair{"antimatter", &antimatter},
                                  std::pair{"mixed", &mixed}}) {
    const Trajectory t = propagate(*psi, cfg.ham, cfg.time.dt, n_steps, cfg.time.record_every);
    run.write(std::string("free_fall_") + name + ".csv", t.series.to_csv());
    run.write(std::string("free_fall_") + name + "_a3.csv", acceleration_csv(t));
    run.check(std::string(name) + "_norm_drift", drift(t.series, "norm"), 1e-9);
    run.check(std::string(name) + "_s3_drift", drift(t.series, "S3"), 1e-9);
  }
}

void run_dfeg(const RunConfig& cfg, Run& run) {
  HamiltonianConfig ham = cfg.ham;
  ham.mirror = mirror_config(cfg);
  const Grid grid(cfg.grid.n_points, cfg.grid.z_min, cfg.grid.z_max);
  const SpinorField psi = project_energy(
      make_gaussian_packet(grid, cfg.packet.z0, cfg.packet.p0, cfg.packet.width, ham.hbar), 1, ham);
  const DfegParams params = DfegParams::make(cfg.dfeg.sigma, ham, cfg.dfeg.x0);
  const LindbladMode mode = lindblad_mode(cfg.dfeg.mode);
  const std::size_t n_steps = step_count(cfg.time.t_end, cfg.time.dt);
  if (cfg.dfeg.method == "unravel") {
    if (mode != LindbladMode::full) throw ConfigError("unravel supports dfeg.mode = full only");
    UnravelOptions opts;
    opts.record_every = cfg.time.record_every;
    const Ensemble e =
        unravel(psi, ham, params, cfg.time.dt, n_steps, cfg.dfeg.n_traj, cfg.seed, opts);
    run.write("dfeg_unravel.csv", e.series.to_csv());
    run.check("ensemble_norm_drift", drift(e.series, "norm"), 1e-9);
  } else {
    DenseOptions opts;
    opts.record_every = cfg.time.record_every;
    opts.integrator =
        cfg.dfeg.integrator == "strang" ? DenseIntegrator::strang_exact
                                        : DenseIntegrator::rk4_interaction;
    const DenseRun d = evolve_dense(DensityMatrix::from_pure(psi), ham, params, cfg.time.dt,
                                    n_steps, mode, opts);
    run.write("dfeg_dense.csv", d.series.to_csv());
    run.check("trace_drift", d.max_trace_drift, 1e-9);
    run.check("negative_eigenvalue", std::max(0.0, -d.min_eigenvalue), 1e-8);
    run.check("hermiticity_error", d.max_hermiticity_error, 1e-10);
    if (mode != LindbladMode::conservative) run.check("purity_increase", d.max_purity_increase, 1e-10);
  }
  run.note("x0", params.x0);
  run.note("gamma_rate", params.gamma_rate);
}

void run_qbounce(const RunConfig& cfg, Run& run) {
  HamiltonianConfig ham = cfg.ham;
  ham.mirror = mirror_config(cfg);
  const std::size_t n_steps = step_count(cfg.time.t_end, cfg.time.dt);
  const auto& kind = cfg.qbounce.kind;

  if (kind == "reflection") {
    ReflectionScenario sc;
    sc.n_points = cfg.grid.n_points;
    sc.z_min = cfg.grid.z_min;
    sc.z_max = cfg.grid.z_max;
    sc.z0 = cfg.packet.z0;
    sc.p0 = cfg.packet.p0;
    sc.width = cfg.packet.width;
    sc.dt = cfg.time.dt;
    sc.t_end = cfg.time.t_end;
    sc.record_every = cfg.time.record_every;
    const auto points = dirichlet_limit_check(cfg.ham, cfg.qbounce.v0_list, sc);
    TimeSeries ts({"v0_over_mc2", "max_boundary_amplitude", "max_j3_ratio", "transmitted"});
    for (const auto& p : points) {
      ts.push_row({p.v0, p.max_boundary_amplitude, p.max_j3_ratio, p.transmitted});
    }
    run.write("qbounce_reflection.csv", ts.to_csv());
    return;
  }

  const Grid grid(cfg.grid.n_points, cfg.grid.z_min, cfg.grid.z_max);
  const SpinorField psi = project_energy(
      make_gaussian_packet(grid, cfg.packet.z0, cfg.packet.p0, cfg.packet.width, ham.hbar), 1, ham);

  if (kind == "entropic") {
    const DfegParams params = DfegParams::make(cfg.dfeg.sigma, ham, cfg.dfeg.x0);
    DenseOptions opts;
    opts.record_every = cfg.time.record_every;
    opts.integrator = cfg.dfeg.integrator == "strang" ? DenseIntegrator::strang_exact
                                                      : DenseIntegrator::rk4_interaction;
    const BounceRun b = qbounce_run(DensityMatrix::from_pure(psi), ham, params,
                                    lindblad_mode(cfg.dfeg.mode), cfg.time.dt, n_steps, opts);
    run.write("qbounce_entropic.csv", b.series.to_csv());
    run.check("negative_eigenvalue",
              std::max(0.0, -b.final_density->min_eigenvalue()), 1e-8);
    run.note("turning_points", b.turning_times);
    return;
  }

  const BounceRun b = qbounce_run(psi, ham, cfg.time.dt, n_steps, cfg.time.record_every);
  run.write("qbounce_series.csv", b.series.to_csv());
  TimeSeries ac({"t", "re", "im"});
  for (std::size_t i = 0; i < b.auto_t.size(); ++i) {
    ac.push_row({b.auto_t[i], b.autocorrelation[i].real(), b.autocorrelation[i].imag()});
  }
  run.write("qbounce_autocorrelation.csv", ac.to_csv());

  // Peaks of the autocorrelation spectrum against m g x0 a_n.
  const int n_levels = static_cast<int>(cfg.qbounce.n_levels);
  const AiryZeros a = airy_zero_magnitudes(n_levels + 1);
  const double e0 = ham.mass * ham.g * default_x0(ham);
  const auto peaks = autocorrelation_peaks(
      b.auto_t, b.autocorrelation, ham.rest_energy(), ham.hbar, 0.5 * e0 * a(1),
      e0 * 0.5 * (a(n_levels) + a(n_levels + 1)), 0.002);
  TimeSeries lv({"n", "level_energy", "peak_energy", "spacing_level", "spacing_peak",
                 "spacing_rel_error"});
  double prev_level = 0.0, prev_peak = 0.0, worst = 0.0;
  for (int n = 1; n <= n_levels; ++n) {
    const double level = e0 * a(n);
    // Nearest peak within half a level spacing; NaN when the level is missing.
    double peak = std::numeric_limits<double>::quiet_NaN();
    const double window = 0.5 * e0 * (a(n + 1) - a(n));
    for (const auto& p : peaks) {
      if (std::abs(p.energy - level) > window) continue;
      if (std::isnan(peak) || std::abs(p.energy - level) < std::abs(peak - level)) peak = p.energy;
    }
    const double sl = n > 1 ? level - prev_level : std::numeric_limits<double>::quiet_NaN();
    const double sp = n > 1 ? peak - prev_peak : std::numeric_limits<double>::quiet_NaN();
    const double err = n > 1 ? std::abs(sp - sl) / sl : std::numeric_limits<double>::quiet_NaN();
    if (n > 1) worst = std::max(worst, std::isnan(err) ? 1.0 : err);
    lv.push_row({static_cast<double>(n), level, peak, sl, sp, err});
    prev_level = level;
    prev_peak = peak;
  }
  run.write("qbounce_levels.csv", lv.to_csv());
  run.check("s3_drift", b.max_s3_drift, 1e-9);
  run.note("max_level_spacing_rel_error", worst);
  run.note("turning_points", b.turning_times);
  run.note("final_below_mirror", b.final_below_mirror);
}

void run_spectrum(const RunConfig& cfg, Run& run) {
  if (cfg.units == UnitSystem::si) {
    const HamiltonianConfig n = neutron_si_config();
    const NeutronScaleReport r = neutron_scale_report(n);
    run.write("neutron_report.json", r.to_json() + "\n");
    const AiryZeros a = airy_zero_magnitudes(static_cast<int>(cfg.spectrum.n) + 1);
    TimeSeries ts({"n", "a_n_plus_1", "E_n_nonrel_J"});
    for (int k = 0; k <= static_cast<int>(cfg.spectrum.n); ++k) {
      ts.push_row({static_cast<double>(k), a(k + 1), n.mass * n.g * r.x0 * a(k + 1)});
    }
    run.write("neutron_levels.csv", ts.to_csv());
    return;
  }
  const SpectralParams params = SpectralParams::for_mu0(cfg.spectrum.mu0, cfg.spectrum.s);
  const LevelTable table = find_levels(params, static_cast<int>(cfg.spectrum.n));
  run.write("levels.csv", table.to_csv());
  run.write("levels.json", table.to_json() + "\n");
  std::size_t missing = 0;
  for (const auto& r : table.rows) missing += r.found ? 0 : 1;
  run.check("levels_not_found", static_cast<double>(missing), 0.5);
}

void run_nonrel(const RunConfig& cfg, Run& run) {
  const LimitScenario sc = limit_scenario_from_string(cfg.nonrel.scenario);
  LimitOptions o = cfg.nonrel.options;
  const LimitTable t = limit_convergence_study(cfg.nonrel.c_list, sc, o);
  run.write("nonrel_" + cfg.nonrel.scenario + ".csv", t.to_csv());
  run.note("fitted_slope", t.fitted_slope);
  Json rel = Json::array();
  for (const auto& r : t.rows) rel.push_back(r.rms_error / r.fall_distance);
  run.note("rms_over_fall_distance", rel);
}

void run_verify(Run& run) {
  const auto results = run_invariant_suite();
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " value=" << r.value
              << " limit=" << r.limit << '\n';
  }
  run.add_checks(results);
  run.write("verify.csv", invariants_csv(results));
}

int dispatch(Command command, const Flags& flags) {
  const auto start = std::chrono::steady_clock::now();
  fs::path out(flags.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << out << ": " << ec.message() << '\n';
    return 2;
  }
  Run run(out);
  if (flags.threads > 0) omp_set_num_threads(flags.threads);
  const int threads = omp_get_max_threads();
  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  RunConfig cfg = default_config(command);
  try {
    if (!flags.preset.empty()) apply_preset(cfg, flags.preset);
    if (!flags.config.empty()) {
      const std::string preset = cfg.preset;
      RunConfig loaded = cfg;
      std::ifstream in(flags.config);
      if (!in) throw ConfigError("cannot open config file " + flags.config);
      Json doc;
      try {
        doc = Json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(flags.config + ": " + e.what());
      }
      apply_json(loaded, doc);
      cfg = loaded;
      cfg.preset = preset;
    }
    if (!flags.units.empty()) cfg.units = flags.units == "si" ? UnitSystem::si : UnitSystem::natural;
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.mu0) cfg.spectrum.mu0 = *flags.mu0;
    if (flags.n) cfg.spectrum.n = *flags.n;
    if (flags.s) cfg.spectrum.s = *flags.s;
    if (flags.scenario) cfg.nonrel.scenario = *flags.scenario;
    if (!flags.c_list.empty()) cfg.nonrel.c_list = flags.c_list;
    if (command == Command::nonrel_compare) limit_scenario_from_string(cfg.nonrel.scenario);
    cfg.validate();
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    run.write_manifest(cfg.to_json(), "config_error", 2, seconds(), threads);
    return 2;
  }

  int code = 0;
  std::string status = "ok";
  try {
    switch (command) {
      case Command::free_fall: run_free_fall(cfg, run); break;
      case Command::dfeg: run_dfeg(cfg, run); break;
      case Command::qbounce: run_qbounce(cfg, run); break;
      case Command::spectrum: run_spectrum(cfg, run); break;
      case Command::nonrel_compare: run_nonrel(cfg, run); break;
      case Command::verify: run_verify(run); break;
    }
    if (!run.all_pass()) {
      code = 3;
      status = "invariant_failure";
      std::cerr << "invariant check failed; see " << (out / "manifest.json").string() << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    code = 2;
    status = "config_error";
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    code = 3;
    status = "numerical_error";
  }
  run.write_manifest(cfg.to_json(), status, code, seconds(), threads);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gravitational Dirac dynamics, entropic decoherence and quantum bouncer runs"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--preset", flags.preset, "Named parameter set");
  app.add_option("--out", flags.out, "Output directory")->capture_default_str();
  app.add_option("--seed", flags.seed, "Seed for stochastic runs");
  app.add_option("--threads", flags.threads, "OpenMP threads (0: runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--units", flags.units, "Unit system")
      ->check(CLI::IsMember({"natural", "si"}));

  auto* ff = app.add_subcommand("free-fall", "Matter, antimatter and mixed packets in free fall");
  auto* df = app.add_subcommand("dfeg", "Entropic Lindblad evolution (dense or unraveled)");
  auto* qb = app.add_subcommand("qbounce", "Quantum bouncer, reflection sweep or entropic bounce");
  auto* sp = app.add_subcommand("spectrum", "Quantized Rindler levels against the Airy expansion");
  sp->add_option("--mu0", flags.mu0, "Dimensionless m c^3/(hbar g)");
  sp->add_option("--n", flags.n, "Number of levels");
  sp->add_option("--s", flags.s, "Branch sign (+1 or -1)");
  auto* nr = app.add_subcommand("nonrel-compare", "Dirac against Schrodinger convergence in c");
  nr->add_option("--scenario", flags.scenario, "free_fall, dfeg or qbounce_static");
  nr->add_option("--c-list", flags.c_list, "Speeds of light to sweep")->delimiter(',');
  auto* vf = app.add_subcommand("verify", "Run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Command command = Command::verify;
  if (ff->parsed()) command = Command::free_fall;
  if (df->parsed()) command = Command::dfeg;
  if (qb->parsed()) command = Command::qbounce;
  if (sp->parsed()) command = Command::spectrum;
  if (nr->parsed()) command = Command::nonrel_compare;
  if (vf->parsed()) command = Command::verify;
  return dispatch(command, flags);
}
