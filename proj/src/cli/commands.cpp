#include "commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "config.hpp"
#include "manifest.hpp"
#include "stepflow/convexity_audit.hpp"
#include "stepflow/energy.hpp"
#include "stepflow/errors.hpp"
#include "stepflow/evolution.hpp"
#include "stepflow/experiments.hpp"
#include "stepflow/field_io.hpp"
#include "stepflow/kernels.hpp"

namespace stepflow::cli {
namespace {

namespace fs = std::filesystem;

struct CoeffFlags {
  std::string preset;
  std::string config;
  std::vector<double> nondim;
  double eps0 = -1.0;

  void add(CLI::App* app) {
    app->add_option("--preset", preset, "material preset: baseline, si113, si111");
    app->add_option("--coeffs", config, "JSON file with a coefficients block");
    app->add_option("--nondim", nondim, "nondimensional c1 c2 c3 a")->expected(4)->delimiter(',');
    app->add_option("--eps0", eps0, "override the preset misfit");
  }

  ModelCoefficients resolve(const std::string& fallback_preset = "") const {
    const int chosen = !preset.empty() + !config.empty() + !nondim.empty();
    if (chosen > 1) throw ConfigError("give only one of --preset, --coeffs, --nondim");
    if (!config.empty()) {
      const json j = load_json(config);
      return coefficients_from(j.contains("coefficients") ? j.at("coefficients") : j, "coefficients");
    }
    if (!nondim.empty()) {
      try {
        return ModelCoefficients::nondimensional(nondim[0], nondim[1], nondim[2], nondim[3]);
      } catch (const InvalidInput& e) {
        throw ConfigError(std::string("--nondim: ") + e.what());
      }
    }
    const std::string name = preset.empty() ? fallback_preset : preset;
    if (name.empty()) throw ConfigError("no coefficients given: use --preset, --coeffs or --nondim");
    json block = {{"preset", name}};
    if (eps0 >= 0.0) block["eps0"] = eps0;
    return coefficients_from(block, "--preset");
  }
};

json breakdown_json(const EnergyBreakdown& e) {
  return {{"nonlocal", e.nonlocal},         {"local_log", e.local_log}, {"local_linear", e.local_linear},
          {"local_cubic", e.local_cubic},   {"total", e.total}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ensure_dir(const fs::path& d) {
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) throw ConfigError("cannot create directory " + d.string() + ": " + ec.message());
}

fs::path parent_or_cwd(const fs::path& p) { return p.has_parent_path() ? p.parent_path() : fs::path("."); }

int cmd_coeffs(const CoeffFlags& f) {
  const ModelCoefficients c = f.resolve();
  json j = coefficients_json(c);
  if (!f.preset.empty()) {
    const auto p = physical_preset(f.preset);
    j["material"] = {{"g1", p->g1}, {"g3", p->g3}, {"a", p->a},  {"nu", p->nu},
                     {"G", p->G},   {"r_c", p->r_c}, {"eps0", f.eps0 >= 0.0 ? f.eps0 : p->eps0}};
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_energy(const CoeffFlags& f, const std::string& field) {
  const ModelCoefficients c = f.resolve();
  ScalarField h;
  try {
    h = read_snapshot(field);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  json j = breakdown_json(total_energy(h, c));
  j["h_half_seminorm_sq"] = h_half_seminorm_sq(h);
  j["grid"] = {{"n", h.grid().n}, {"L", h.grid().L}};
  j["slope"] = {h.slope()[0], h.slope()[1]};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_evolve(const std::string& config_path, const fs::path& out, const std::string& snapshots, int snapshot_every) {
  const auto t0 = std::chrono::steady_clock::now();
  const json raw = load_json(config_path);
  RunConfig cfg = run_config_from(raw);
  const ScalarField f0 = initial_field(cfg);
  if (!(cfg.evolution.dt > 0.0)) cfg.evolution.dt = default_dt(cfg.grid, cfg.coeffs, default_kappa(f0, cfg.coeffs));
  try {
    cfg.evolution.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("field 'evolution': ") + e.what());
  }

  const fs::path dir = parent_or_cwd(out);
  ensure_dir(dir);
  if (!snapshots.empty()) ensure_dir(snapshots);
  std::ofstream csv(out);
  if (!csv) throw ConfigError("cannot open " + out.string() + " for writing");
  csv << "t,E_total,E_nonlocal,E_log,E_lin,E_cubic,mass,max_slope,dt,ht_norm\n";

  RunManifest m;
  m.command = "evolve";
  m.config = raw;
  m.coefficients = coefficients_json(cfg.coeffs);
  m.grid = {{"n", cfg.grid.n}, {"L", cfg.grid.L}};
  m.seed = cfg.seed;
  m.outputs.push_back(out);

  std::size_t record = 0;
  auto observer = [&](const ScalarField& f, const TraceRecord& r) {
    const auto& e = r.energy;
    csv << format_double(r.t) << ',' << format_double(e.total) << ',' << format_double(e.nonlocal) << ','
        << format_double(e.local_log) << ',' << format_double(e.local_linear) << ',' << format_double(e.local_cubic)
        << ',' << format_double(r.mass) << ',' << format_double(r.max_slope) << ',' << format_double(r.dt) << ','
        << format_double(r.ht_norm) << '\n';
    if (!snapshots.empty() && snapshot_every > 0 && record % static_cast<std::size_t>(snapshot_every) == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "snap_%06zu.bin", record);
      const fs::path p = fs::path(snapshots) / name;
      write_snapshot(f, p);
      m.outputs.push_back(p);
    }
    ++record;
  };

  int rc = 0;
  try {
    const EvolveResult res = evolve(f0, cfg.evolution, cfg.coeffs, observer);
    if (!snapshots.empty()) {
      const fs::path p = fs::path(snapshots) / "final.bin";
      write_snapshot(res.field, p);
      m.outputs.push_back(p);
    }
  } catch (const StepRejected& e) {
    std::cerr << "stepflow evolve: numerical failure: " << e.what() << '\n';
    rc = 1;
  }
  csv.close();
  m.wall_clock_s = seconds_since(t0);
  write_manifest(m, dir);
  return rc;
}

// Initial surface of a run config, as CSV (and optionally a snapshot), plus its energy.
int cmd_profile(const std::string& config_path, const fs::path& out, const std::string& snapshot) {
  const auto t0 = std::chrono::steady_clock::now();
  const json raw = load_json(config_path);
  const RunConfig cfg = run_config_from(raw);
  const ScalarField f = initial_field(cfg);
  const fs::path dir = parent_or_cwd(out);
  ensure_dir(dir);
  write_field_csv(f, out);

  RunManifest m;
  m.command = "profile";
  m.config = raw;
  m.coefficients = coefficients_json(cfg.coeffs);
  m.grid = {{"n", cfg.grid.n}, {"L", cfg.grid.L}};
  m.seed = cfg.seed;
  m.outputs.push_back(out);
  if (!snapshot.empty()) {
    write_snapshot(f, snapshot);
    m.outputs.push_back(snapshot);
  }
  m.wall_clock_s = seconds_since(t0);
  write_manifest(m, dir);
  std::cout << breakdown_json(total_energy(f, cfg.coeffs)).dump(2) << '\n';
  return 0;
}

int cmd_audit(const CoeffFlags& f, int radii, int angles, const std::string& out, const std::string& density_out) {
  const ModelCoefficients c = f.resolve();
  AuditSpec spec;
  spec.n_radii = radii;
  spec.n_angles = angles;
  AuditReport r;
  try {
    r = convexity_audit(c, spec);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  if (!out.empty()) write_audit_csv(r, out);
  if (!density_out.empty()) write_density_csv(c, std::max(0.2, 2.0 * r.psi0_nonconvex_radius), 400, density_out);
  const json j = {{"samples", r.samples},
                  {"strict_convexity_modulus", r.modulus},
                  {"psi_min_eigmin", r.psi_min_eig},
                  {"psi_worst_eig_over_norm", r.psi_worst_ratio},
                  {"psi_convex", r.psi_convex},
                  {"strict_worst_margin_over_norm", r.strict_worst_ratio},
                  {"strict_convexity_ok", r.strict_ok},
                  {"psi0_min_eigmin", r.psi0_min_eig},
                  {"psi0_min_at", {r.psi0_min_at[0], r.psi0_min_at[1]}},
                  {"psi0_nonconvex", r.psi0_nonconvex},
                  {"psi0_axis_witness", {r.psi0_witness[0], r.psi0_witness[1]}},
                  {"psi0_axis_witness_eigmin", r.psi0_witness_eig},
                  {"psi0_nonconvex_radius", r.psi0_nonconvex_radius}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct ScalingFlags {
  std::vector<double> nondim{1.0, 1.0, 1.0};
  double B = 1.0;
  double L = 1.0;
  int m = 1;
  double a_max = 1e-1;
  double a_min = 1e-4;
  int per_decade = 2;
  int quadrature = 512;
  double fit_decades = 2.0;
  std::string out_dir = ".";
};

int cmd_scaling(const ScalingFlags& s) {
  const auto t0 = std::chrono::steady_clock::now();
  if (s.nondim.size() != 3) throw ConfigError("--c expects c1,c2,c3");
  if (!(s.a_min > 0.0) || !(s.a_max > s.a_min) || s.per_decade < 1) throw ConfigError("need 0 < a-min < a-max");
  ModelCoefficients c;
  try {
    c = ModelCoefficients::nondimensional(s.nondim[0], s.nondim[1], s.nondim[2], 1.0);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("--c: ") + e.what());
  }
  const double omega = 2.0 * std::numbers::pi * s.m / s.L;
  std::vector<double> as;
  const int steps = static_cast<int>(std::lround(std::log10(s.a_max / s.a_min) * s.per_decade));
  for (int i = 0; i <= steps; ++i) as.push_back(s.a_max * std::pow(s.a_min / s.a_max, double(i) / steps));

  ScalingReport r;
  try {
    r = upper_bound_scaling_scan(c, omega, s.B, s.L, as, s.quadrature, s.fit_decades);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  const fs::path dir = s.out_dir;
  ensure_dir(dir);
  write_scaling_csv(r, dir / "scaling.csv");
  bool sandwiched = true;
  for (const auto& p : r.points) sandwiched = sandwiched && p.energy >= p.lower_bound;
  const auto& last = r.points.back();
  const json summary = {{"slope", r.slope},
                        {"fit_points", r.fit_points},
                        {"fit_prefactor", r.fit_prefactor},
                        {"reference_prefactor", r.reference_prefactor},
                        {"prefactor_at_smallest", r.prefactor_at_smallest},
                        {"prefactor_ratio", r.prefactor_at_smallest / r.reference_prefactor},
                        {"psi_vs_psi0_rel_at_smallest", std::abs(last.energy - last.energy_psi0) / std::abs(last.energy)},
                        {"lower_bound_sandwich", sandwiched}};
  std::ofstream(dir / "scaling_summary.json") << summary.dump(2) << '\n';

  RunManifest man;
  man.command = "scaling-sweep";
  man.config = {{"c", s.nondim}, {"B", s.B},         {"L", s.L},           {"m", s.m},
                {"a", as},       {"quadrature", s.quadrature}, {"fit_decades", s.fit_decades}};
  man.coefficients = coefficients_json(c);
  man.grid = {{"quadrature_n", s.quadrature}};
  man.outputs = {dir / "scaling.csv", dir / "scaling_summary.json"};
  man.wall_clock_s = seconds_since(t0);
  write_manifest(man, dir);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

struct TransitionFlags {
  std::string vary = "lt";
  std::string preset = "baseline";
  int N = 0;
  double eps0 = 0.012;
  double lt = 80.0;
  double lo = 0.0, hi = 0.0;
  int points = 60;
  std::string out_dir = ".";
};

int cmd_transition(TransitionFlags t) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto material = physical_preset(t.preset);
  if (!material) throw ConfigError("unknown preset '" + t.preset + "'");
  TransitionSweep s;
  s.points = t.points;
  s.eps0 = t.eps0;
  s.lt_over_a = t.lt;
  if (t.vary == "lt") {
    s.vary = SweepVariable::StepSpacing;
    s.N = t.N > 0 ? t.N : 15;
    s.lo = t.lo > 0.0 ? t.lo : 3.0;
    s.hi = t.hi > 0.0 ? t.hi : 160.0;
  } else if (t.vary == "eps0") {
    s.vary = SweepVariable::Misfit;
    s.N = t.N > 0 ? t.N : 10;
    s.lo = t.lo > 0.0 ? t.lo : 0.004;
    s.hi = t.hi > 0.0 ? t.hi : 0.03;
  } else {
    throw ConfigError("--vary must be 'lt' or 'eps0'");
  }
  TransitionReport r;
  try {
    r = transition_scan(s, *material);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  const fs::path dir = t.out_dir;
  ensure_dir(dir);
  const fs::path csv = dir / ("transition_" + t.vary + ".csv");
  const fs::path js = dir / ("transition_" + t.vary + ".json");
  write_transition_csv(r, s, csv);
  const json summary = {{"vary", t.vary},
                        {"sign_changes", r.sign_changes},
                        {"crossings", r.crossings},
                        {"bunching_at_small_end", r.bunching_at_small_end},
                        {"crossing_status", r.crossings.empty() ? "no crossing in range" : "crossing found"}};
  std::ofstream(js) << summary.dump(2) << '\n';

  RunManifest man;
  man.command = "transition-scan";
  man.config = {{"vary", t.vary}, {"preset", t.preset}, {"N", s.N},   {"eps0", s.eps0},
                {"lt_over_a", s.lt_over_a}, {"lo", s.lo},   {"hi", s.hi}, {"points", s.points}};
  man.coefficients = coefficients_json(derive_coefficients(*material));
  man.grid = json::object();
  man.outputs = {csv, js};
  man.wall_clock_s = seconds_since(t0);
  write_manifest(man, dir);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"stepflow: continuum model of stepped epitaxial surfaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", STEPFLOW_VERSION);

  CoeffFlags cf_coeffs, cf_energy, cf_audit;
  auto* coeffs = app.add_subcommand("coeffs", "print derived model coefficients as JSON");
  cf_coeffs.add(coeffs);

  auto* energy = app.add_subcommand("energy", "energy breakdown of a field snapshot");
  cf_energy.add(energy);
  std::string field;
  energy->add_option("--field", field, "binary snapshot")->required();

  auto* profile = app.add_subcommand("profile", "write the initial surface of a run config as CSV");
  std::string profile_config, profile_out = "profile.csv", profile_snapshot;
  profile->add_option("--config", profile_config, "run configuration (JSON)")->required();
  profile->add_option("--out", profile_out, "CSV with columns x1, x2, h, h_total");
  profile->add_option("--snapshot", profile_snapshot, "also write a binary snapshot");

  auto* evolve_cmd = app.add_subcommand("evolve", "run the gradient flow");
  std::string config_path, out = "trace.csv", snapshots;
  int snapshot_every = 1;
  evolve_cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
  evolve_cmd->add_option("--out", out, "trace CSV");
  evolve_cmd->add_option("--snapshots", snapshots, "directory for binary snapshots");
  evolve_cmd->add_option("--snapshot-every", snapshot_every, "write every k-th trace record");

  auto* audit = app.add_subcommand("convexity-audit", "sample Hessians of Psi and Psi0");
  cf_audit.add(audit);
  int radii = 100, angles = 100;
  std::string audit_out, density_out;
  audit->add_option("--radii", radii);
  audit->add_option("--angles", angles);
  audit->add_option("--out", audit_out, "per-sample CSV");
  audit->add_option("--density-out", density_out, "Psi0/Psi along an axis, CSV");

  ScalingFlags sf;
  auto* scaling = app.add_subcommand("scaling-sweep", "meander-family minimum energy vs a");
  scaling->add_option("--c", sf.nondim, "c1,c2,c3")->expected(3)->delimiter(',');
  scaling->add_option("--B", sf.B);
  scaling->add_option("--L", sf.L);
  scaling->add_option("--m", sf.m, "omega = 2 pi m / L");
  scaling->add_option("--a-max", sf.a_max);
  scaling->add_option("--a-min", sf.a_min);
  scaling->add_option("--per-decade", sf.per_decade);
  scaling->add_option("--quadrature", sf.quadrature);
  scaling->add_option("--fit-decades", sf.fit_decades);
  scaling->add_option("--out-dir", sf.out_dir);

  TransitionFlags tf;
  auto* transition = app.add_subcommand("transition-scan", "bunching vs meandering energy densities");
  transition->add_option("--vary", tf.vary, "lt or eps0");
  transition->add_option("--preset", tf.preset);
  transition->add_option("--N", tf.N, "steps per period (default 15 for lt, 10 for eps0)");
  transition->add_option("--eps0", tf.eps0, "misfit for lt sweeps");
  transition->add_option("--lt", tf.lt, "l_t / a for eps0 sweeps");
  transition->add_option("--lo", tf.lo);
  transition->add_option("--hi", tf.hi);
  transition->add_option("--points", tf.points);
  transition->add_option("--out-dir", tf.out_dir);

  auto* check = app.add_subcommand("selfcheck", "fast invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*coeffs) return cmd_coeffs(cf_coeffs);
    if (*energy) return cmd_energy(cf_energy, field);
    if (*profile) return cmd_profile(profile_config, profile_out, profile_snapshot);
    if (*evolve_cmd) return cmd_evolve(config_path, out, snapshots, snapshot_every);
    if (*audit) return cmd_audit(cf_audit, radii, angles, audit_out, density_out);
    if (*scaling) return cmd_scaling(sf);
    if (*transition) return cmd_transition(tf);
    if (*check) return selfcheck() == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "stepflow: config error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "stepflow: config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "stepflow: invalid input: " << e.what() << '\n';
    return 2;
  } catch (const StepRejected& e) {
    std::cerr << "stepflow: numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "stepflow: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace stepflow::cli
