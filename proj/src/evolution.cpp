#include "stepflow/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "stepflow/errors.hpp"
#include "stepflow/kernels.hpp"
#include "stepflow/local_energy.hpp"

namespace stepflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Largest Hessian eigenvalue of Psi over slopes with |p| in [rmin, rmax].
// Both radial eigenvalues are convex in r, so the endpoints suffice.
double hessian_bound(double rmin, double rmax, const ModelCoefficients& c) {
  auto at = [&](double r) {
    if (r <= 0.0) return 2.0 * c.a * c.c1 / c.gamma0;
    return hessian_psi(Slope{r, 0.0}, c).eigmax;
  };
  return std::max(at(rmin), at(rmax));
}

struct Accepted {
  ScalarField field;
  EnergyBreakdown energy;
  double dt;
  int halvings;
};

Accepted advance(const ScalarField& f, const EnergyBreakdown& e, double dt, const EvolutionConfig& cfg,
                 const ModelCoefficients& c) {
  int halvings = 0;
  for (;;) {
    const double kappa = cfg.kappa ? *cfg.kappa : default_kappa(f, c);
    bool ok = true;
    ScalarField next;
    EnergyBreakdown en;
    try {
      next = step(f, dt, kappa, c);
      en = total_energy(next, c);
      if (!std::isfinite(en.total)) throw StepRejected("non-finite energy");
    } catch (const StepRejected&) {
      if (cfg.dt_control == DtControl::Fixed) throw;
      ok = false;
    }
    if (ok && (cfg.dt_control == DtControl::Fixed || en.total <= e.total + 1e-12 * std::abs(e.total))) {
      return {std::move(next), en, dt, halvings};
    }
    if (++halvings > cfg.max_halvings) {
      throw StepRejected("dt collapse: energy still increases after " + std::to_string(cfg.max_halvings) +
                         " halvings");
    }
    dt *= 0.5;
  }
}

TraceRecord make_record(double t, const ScalarField& f, const EnergyBreakdown& e, double ht, double dt) {
  const VectorField g = full_gradient(f);
  double ms = 0.0;
  for (std::size_t i = 0; i < g.x1.size(); ++i) ms = std::max(ms, std::hypot(g.x1[i], g.x2[i]));
  return {t, e, f.mean(), ms, ht, dt};
}

double rate_norm(const ScalarField& a, const ScalarField& b, double dt) {
  std::vector<double> d(a.values().size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (a.values()[i] - b.values()[i]) / dt;
  return std::sqrt(l2_norm_sq(ScalarField::from_unnormalized(a.grid(), std::move(d))));
}

}  // namespace

void EvolutionConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidInput("t_end must be non-negative");
  if (kappa && !(*kappa >= 0.0)) throw InvalidInput("kappa must be non-negative");
  if (record_every < 1) throw InvalidInput("record_every must be >= 1");
  if (max_halvings < 0) throw InvalidInput("max_halvings must be >= 0");
}

double default_kappa(const ScalarField& f, const ModelCoefficients& c) {
  const VectorField g = padded_full_gradient(f);
  double rmin = INFINITY, rmax = 0.0;
  for (std::size_t i = 0; i < g.x1.size(); ++i) {
    const double r = std::hypot(g.x1[i], g.x2[i]);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  const double cubic = 3.0 * c.a * c.c3 * std::max(1.0, rmax);
  return std::max(cubic, 0.5 * hessian_bound(rmin, rmax, c));
}

double default_dt(const Grid& g, const ModelCoefficients& c, double kappa) {
  const double w = kTwoPi / g.L;
  double worst = 0.0;
  for (int k1 = -g.n / 2 + 1; k1 < g.n / 2; ++k1)
    for (int k2 = 0; k2 < g.n / 2; ++k2) {
      const double K2 = w * w * (double(k1) * k1 + double(k2) * k2);
      const double K = std::sqrt(K2);
      worst = std::max(worst, std::abs(c.c1 * K2 * kTwoPi * K - kappa * K2 * K2));
    }
  return worst > 0.0 ? 0.1 / worst : 1.0;
}

ScalarField step(const ScalarField& f, double dt, double kappa, const ModelCoefficients& c) {
  const Grid& g = f.grid();
  const int n = g.n;
  const int half = n / 2 + 1;
  const double w = kTwoPi / g.L;

  const VectorField p = padded_full_gradient(f);
  VectorField z = VectorField::zero(p.grid);
  kernels::active().flux(p.x1.data(), p.x2.data(), z.x1.data(), z.x2.data(), p.x1.size(), kernels::Coeffs::from(c));
  const ScalarField div = truncated_divergence(z, g);

  const auto hs = fft::forward(f.values(), n);
  const auto ds = fft::forward(div.values(), n);
  std::vector<std::complex<double>> out(hs.size());
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = wavenumber(i1, n);
    for (int j2 = 0; j2 < half; ++j2) {
      const std::size_t q = static_cast<std::size_t>(i1) * half + j2;
      if ((k1 == 0 && j2 == 0) || k1 == -n / 2 || j2 == n / 2) continue;
      const double K2 = w * w * (double(k1) * k1 + double(j2) * j2);
      const double K4 = K2 * K2;
      const double m = kTwoPi * std::sqrt(K2);
      const double den = 1.0 - dt * c.c1 * K2 * m + dt * kappa * K4;
      if (!(den > 0.0)) throw StepRejected("dt too large: implicit denominator is not positive");
      out[q] = (hs[q] + dt * (K2 * ds[q] + kappa * K4 * hs[q])) / den;
    }
  }
  std::vector<double> v = fft::inverse(out, n);
  for (double x : v)
    if (!std::isfinite(x)) throw StepRejected("step produced non-finite values");
  return ScalarField::from_unnormalized(g, std::move(v), f.slope());
}

ScalarField step(const ScalarField& f, const EvolutionConfig& cfg, const ModelCoefficients& c) {
  cfg.validate();
  return step(f, cfg.dt, cfg.kappa ? *cfg.kappa : default_kappa(f, c), c);
}

EvolveResult evolve(const ScalarField& f0, const EvolutionConfig& cfg, const ModelCoefficients& c,
                    const StepObserver& observer) {
  cfg.validate();
  EvolveResult res{remove_nyquist(f0), {}};
  EnergyBreakdown e = total_energy(res.field, c);
  double t = 0.0;
  double dt = cfg.dt;
  res.trace.records.push_back(make_record(t, res.field, e, 0.0, 0.0));
  if (observer) observer(res.field, res.trace.records.back());

  const double t_stop = cfg.t_end * (1.0 - 1e-14);
  while (t < t_stop && (cfg.max_steps == 0 || res.trace.steps < cfg.max_steps)) {
    const double h = std::min(dt, cfg.t_end - t);
    Accepted a = advance(res.field, e, h, cfg, c);
    const double ht = rate_norm(a.field, res.field, a.dt);
    t += a.dt;
    ++res.trace.steps;
    res.trace.halvings += static_cast<std::size_t>(a.halvings);
    res.field = std::move(a.field);
    e = a.energy;
    if (cfg.dt_control == DtControl::Adaptive) dt = a.halvings == 0 ? std::min(cfg.dt, 2.0 * dt) : a.dt;

    const bool last = !(t < t_stop) || (cfg.max_steps != 0 && res.trace.steps == cfg.max_steps);
    if (res.trace.steps % static_cast<std::size_t>(cfg.record_every) == 0 || last) {
      res.trace.records.push_back(make_record(t, res.field, e, ht, a.dt));
      if (observer) observer(res.field, res.trace.records.back());
    }
  }
  return res;
}

double steady_residual(const ScalarField& f, const ModelCoefficients& c) {
  return std::sqrt(l2_norm_sq(laplacian(chemical_potential(f, c))));
}

MinimizeResult minimize(const ScalarField& f0, const ModelCoefficients& c, double dt, double rel_tol,
                        std::size_t max_steps) {
  EvolutionConfig cfg;
  cfg.dt = dt;
  cfg.dt_control = DtControl::Adaptive;
  MinimizeResult r{remove_nyquist(f0), 0.0, 0, false};
  const double r0 = steady_residual(r.field, c);
  r.residual = r0;
  if (r0 == 0.0) {
    r.converged = true;
    return r;
  }
  EnergyBreakdown e = total_energy(r.field, c);
  double h = dt;
  while (r.steps < max_steps) {
    Accepted a = advance(r.field, e, h, cfg, c);
    r.field = std::move(a.field);
    e = a.energy;
    h = a.halvings == 0 ? std::min(dt, 2.0 * h) : a.dt;
    ++r.steps;
    if (r.steps % 10 == 0) {
      r.residual = steady_residual(r.field, c);
      if (r.residual <= rel_tol * r0) {
        r.converged = true;
        break;
      }
    }
  }
  r.residual = steady_residual(r.field, c);
  r.converged = r.converged || r.residual <= rel_tol * r0;
  return r;
}

double linear_growth_rate(const ModelCoefficients& c, Vec2 B, double L, int k1, int k2) {
  const double w = kTwoPi / L;
  const double K1 = w * k1, K2 = w * k2;
  const double KK = K1 * K1 + K2 * K2;
  const double K = std::sqrt(KK);
  double quad;
  if (B[0] == 0.0 && B[1] == 0.0) {
    quad = 2.0 * c.a * c.c1 / c.gamma0 * KK;
  } else {
    const HessianSample H = hessian_psi(B, c);
    quad = H.h11 * K1 * K1 + 2.0 * H.h12 * K1 * K2 + H.h22 * K2 * K2;
  }
  return kTwoPi * c.c1 * K * KK - KK * quad;
}

}  // namespace stepflow
