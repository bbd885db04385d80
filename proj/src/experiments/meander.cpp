#include <cmath>
#include <numbers>

#include "stepflow/errors.hpp"
#include "stepflow/experiments.hpp"
#include "stepflow/local_energy.hpp"

namespace stepflow {
namespace {

constexpr double kPi = std::numbers::pi;

// r(y) = |grad h| = B sqrt(1 + A^2 omega^2 cos^2(omega y)).
double slope_at(const MeanderProfile& p, double y) {
  const double s = p.A * p.omega * std::cos(p.omega * y);
  return p.B * std::sqrt(1.0 + s * s);
}

}  // namespace

void MeanderProfile::validate(double L) const {
  if (!(A >= 0.0) || !std::isfinite(A)) throw InvalidInput("meander amplitude A must be >= 0");
  if (!(B > 0.0)) throw InvalidInput("meander slope B must be positive");
  if (!(omega > 0.0) || !(L > 0.0)) throw InvalidInput("meander needs omega > 0 and L > 0");
  const double m = omega * L / (2.0 * kPi);
  if (std::abs(m - std::round(m)) > 1e-9 * std::max(1.0, m) || std::round(m) < 1.0) {
    throw InvalidInput("omega L / (2 pi) must be a positive integer");
  }
}

EnergyBreakdown meander_energy(const MeanderProfile& p, const ModelCoefficients& c, double L, int quadrature_n) {
  p.validate(L);
  if (quadrature_n < 4) throw InvalidInput("quadrature_n must be >= 4");
  double sb = 0.0, sr = 0.0, s3 = 0.0;
  for (int j = 0; j < quadrature_n; ++j) {
    const double r = slope_at(p, L * j / quadrature_n);
    sb += r * c.c1 * std::log1p(r / c.gamma0);
    sr += r;
    s3 += r * r * r;
  }
  // x-independent integrand: int_Omega = L * int_0^L dy.
  const double w = L * L / quadrature_n;
  EnergyBreakdown e;
  e.nonlocal = -0.5 * c.c1 * kPi * L * L * p.A * p.A * p.B * p.B * p.omega;
  e.local_bracket = c.a * w * sb;
  e.local_linear = c.a * c.c2 * w * sr;
  e.local_log = e.local_bracket - e.local_linear;
  e.local_cubic = c.a * c.c3 * w * s3;
  e.total = e.nonlocal + e.local_bracket + e.local_cubic;
  return e;
}

double meander_energy_psi0(const MeanderProfile& p, const ModelCoefficients& c, double L, int quadrature_n) {
  p.validate(L);
  double s = 0.0;
  for (int j = 0; j < quadrature_n; ++j) s += psi0({slope_at(p, L * j / quadrature_n), 0.0}, c);
  return -0.5 * c.c1 * kPi * L * L * p.A * p.A * p.B * p.B * p.omega + L * L / quadrature_n * s;
}

ScalarField meander_field(const MeanderProfile& p, Grid g) {
  p.validate(g.L);
  return ScalarField::sample(g, {p.B, 0.0}, [&](double, double y) { return p.A * p.B * std::sin(p.omega * y); });
}

double dominant_balance_amplitude(const ModelCoefficients& c, double omega, double B) {
  if (!(omega > 0.0) || !(B > 0.0) || !(c.a > 0.0)) throw InvalidInput("dominant balance needs positive inputs");
  return c.c1 * kPi * kPi / (4.0 * c.c3 * omega * omega * B) / c.a;
}

double meander_leading_energy(const ModelCoefficients& c, double omega, double L) {
  return -std::pow(c.c1, 3) * std::pow(kPi, 5) * L * L / (96.0 * c.c3 * c.c3 * std::pow(omega, 3)) / (c.a * c.a);
}

AmplitudeMinimum minimize_meander_amplitude(const ModelCoefficients& c, double omega, double B, double L,
                                            int quadrature_n, double rel_tol) {
  const double As = dominant_balance_amplitude(c, omega, B);
  auto E = [&](double A) { return meander_energy({A, omega, B}, c, L, quadrature_n).total; };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = As / 10.0, hi = 10.0 * As;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = E(x1), f2 = E(x2);
  int it = 0;
  while (hi - lo > rel_tol * 0.5 * (hi + lo) && it < 500) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = E(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = E(x2);
    }
    ++it;
  }
  const double A = 0.5 * (lo + hi);
  return {A, E(A), it};
}

double meander_first_order_residual(const MeanderProfile& p, const ModelCoefficients& c, double L, int quadrature_n) {
  p.validate(L);
  const double lhs = c.c1 * kPi * L / (c.a * p.omega);
  double rhs = 0.0;
  for (int j = 0; j < quadrature_n; ++j) {
    const double y = L * j / quadrature_n;
    const double r = slope_at(p, y);
    const double co = std::cos(p.omega * y);
    rhs += (c.c1 * std::log1p(r / c.gamma0) / r + c.c1 / (r + c.gamma0) + 3.0 * c.c3 * r) * co * co;
  }
  rhs *= L / quadrature_n;
  return (rhs - lhs) / lhs;
}

double lower_bound_g(double r, const ModelCoefficients& c, double B, double L) {
  const double b = std::abs(B);
  return -0.5 * c.c1 * L * r * r + c.a * c.c3 * r * r * r - 3.0 * c.a * c.c3 * b * r * r;
}

LowerBound lower_bound(const ModelCoefficients& c, double B, double L) {
  const double b = std::abs(B);
  const double a = c.a;
  LowerBound lb;
  lb.leading_constant = std::pow(c.c1, 3) * std::pow(L, 5) / (54.0 * c.c3 * c.c3);
  lb.r_star = c.c1 * L / (3.0 * c.c3 * a) + 2.0 * b;
  // L^2 g(r*) - a c3 |B|^3 L^2, expanded.
  lb.full = -lb.leading_constant / (a * a) - c.c1 * c.c1 * std::pow(L, 4) * b / (3.0 * c.c3 * a) -
            2.0 * c.c1 * std::pow(L, 3) * b * b - 5.0 * a * c.c3 * b * b * b * L * L;
  return lb;
}

}  // namespace stepflow
