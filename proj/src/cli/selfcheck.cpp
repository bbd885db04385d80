#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "commands.hpp"
#include "stepflow/convexity_audit.hpp"
#include "stepflow/energy.hpp"
#include "stepflow/evolution.hpp"
#include "stepflow/experiments.hpp"
#include "stepflow/kernels.hpp"
#include "stepflow/random_field.hpp"
#include "stepflow/u_formulation.hpp"

namespace stepflow::cli {
namespace {

constexpr double kPi = std::numbers::pi;

struct Checker {
  int failures = 0;
  void report(bool ok, const char* name, const std::string& detail) {
    std::printf("%s %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    if (!ok) ++failures;
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ScalarField add_scaled(const ScalarField& f, const ScalarField& v, double eps) {
  std::vector<double> x(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += eps * v.values()[i];
  return ScalarField::from_unnormalized(f.grid(), std::move(x), f.slope());
}

}  // namespace

int selfcheck() {
  Checker ck;
  const auto t0 = std::chrono::steady_clock::now();

  {
    const auto c = derive_coefficients(*physical_preset("baseline"));
    const bool ok = rel(c.c1, 7.2575e6) < 1e-3 && rel(c.c2, 1.1719e8) < 1e-3 && rel(c.gamma0, 9.7109e-8) < 5e-3 &&
                    c.beta > 125 && c.beta < 135;
    ck.report(ok, "coefficients", fmt("c1=%.6g beta=%.4g", c.c1, c.beta));
  }

  const auto nd = ModelCoefficients::nondimensional(1.0, 1.0, 1.0, 0.05);
  {
    const double L = 2.0, A = 0.7, B = 0.9, omega = 2.0 * kPi * 3 / L;
    const auto f = meander_field({A, omega, B}, Grid::make(64, L));
    const double want = A * A * B * B * omega * L / (4.0 * kPi);
    ck.report(rel(h_half_seminorm_sq(f), want) < 1e-10, "seminorm", fmt("rel err %.2e", rel(h_half_seminorm_sq(f), want)));
  }

  {
    const Grid g = Grid::make(32, 2.0 * kPi);
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto f = random_smooth_field(g, {0.4, -0.2}, 0.3, 5, 100 + s);
      const auto v = random_smooth_field(g, {0.0, 0.0}, 1.0, 5, 200 + s);
      const double eps = 1e-5;
      const double d = (total_energy(add_scaled(f, v, eps), nd).total - total_energy(add_scaled(f, v, -eps), nd).total) /
                       (2.0 * eps);
      worst = std::max(worst, rel(d, inner_product(chemical_potential(f, nd), v)));
    }
    ck.report(worst < 1e-6, "variational identity", fmt("worst rel %.2e", worst));
  }

  {
    AuditSpec spec;
    spec.n_radii = 60;
    spec.n_angles = 24;
    const auto r = convexity_audit(nd, spec);
    ck.report(r.psi_convex && r.strict_ok && r.psi0_nonconvex, "convexity audit",
              fmt("psi0 witness |p|=%.3g eig=%.3g", std::hypot(r.psi0_witness[0], r.psi0_witness[1]), r.psi0_witness_eig));
  }

  {
    const auto f = random_smooth_field(Grid::make(32, 1.0), {0.5, 0.1}, 0.05, 4, 7);
    const double e = total_energy(f, nd).total;
    const double fu = total_energy_u(build_u_from_h(f), f.slope(), nd).total;
    ck.report(rel(fu, e) < 1e-8, "u round trip", fmt("rel %.2e", rel(fu, e)));
  }

  {
    const auto c = ModelCoefficients::nondimensional(1.0, 1.0, 1.0, 5.0);
    const auto f0 = random_smooth_field(Grid::make(32, 2.0 * kPi), {0.3, 0.0}, 0.2, 3, 11);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.max_steps = 40;
    const auto res = evolve(f0, cfg, c);
    bool mono = true;
    for (std::size_t i = 1; i < res.trace.records.size(); ++i) {
      const double a = res.trace.records[i - 1].energy.total, b = res.trace.records[i].energy.total;
      mono = mono && b <= a + 1e-12 * std::abs(a);
    }
    const double drift = std::abs(res.trace.records.back().mass);
    ck.report(mono && drift <= 1e-10 * f0.max_abs(), "dissipation", fmt("steps %.0f mass %.1e", double(res.trace.steps), drift));
  }

  if (const kernels::Table* v = kernels::avx2()) {
    const auto f = random_smooth_field(Grid::make(32, 1.0), {0.2, 0.0}, 0.05, 6, 3);
    const VectorField g = padded_full_gradient(f);
    const auto k = kernels::Coeffs::from(nd);
    const auto a = kernels::scalar().density(g.x1.data(), g.x2.data(), g.x1.size(), k);
    const auto b = v->density(g.x1.data(), g.x2.data(), g.x1.size(), k);
    const double d = std::max({rel(b.r_bracket, a.r_bracket), rel(b.r, a.r), rel(b.r3, a.r3)});
    ck.report(d < 1e-13, "simd equivalence", fmt("max rel %.1e", d));
  } else {
    ck.report(true, "simd equivalence", "avx2 unavailable, scalar only");
  }

  {
    const auto c = ModelCoefficients::nondimensional(1.0, 1.0, 1.0, 1e-3);
    const double omega = 2.0 * kPi;
    const auto m = minimize_meander_amplitude(c, omega, 1.0, 1.0, 256);
    const double As = dominant_balance_amplitude(c, omega, 1.0);
    ck.report(rel(m.A, As) < 0.05 && m.energy >= lower_bound(c, 1.0, 1.0).full, "dominant balance",
              fmt("A/A*=%.4f", m.A / As));
  }

  {
    TransitionSweep s;
    s.points = 24;
    const auto r = transition_scan(s, *physical_preset("baseline"));
    ck.report(r.sign_changes == 1 && r.bunching_at_small_end, "transition l_t",
              fmt("crossing l_t/a=%.3g", r.crossings.empty() ? 0.0 : r.crossings.front()));
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d failure(s), %.1f s\n", ck.failures, secs);
  return ck.failures;
}

}  // namespace stepflow::cli
