#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "stepflow/errors.hpp"
#include "stepflow/experiments.hpp"

namespace stepflow {
namespace {

constexpr double kPi = std::numbers::pi;

// int_a^b f over geometric panels shrinking towards `a` (ratio 1/4, down to
// 1e-14 of the length), Gauss-Legendre on each.
template <class F>
double graded_integral(F&& f, double a, double b, bool grade_left, bool grade_right) {
  using GL = boost::math::quadrature::gauss<double, 30>;
  std::vector<double> cuts{a, b};
  const double len = b - a;
  auto grade = [&](double from, double sign) {
    for (double d = 0.25 * len; d > 1e-14 * len; d *= 0.25) cuts.push_back(from + sign * d);
  };
  if (grade_left) grade(a, 1.0);
  if (grade_right) grade(b, -1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += GL::integrate(f, cuts[i], cuts[i + 1]);
  return s;
}

}  // namespace

void BunchProfile::validate() const {
  if (!(H > 0.0) || !(rho > 0.0) || !(L > 0.0)) throw InvalidInput("bunch needs H, rho, L > 0");
  if (H / rho > L * (1.0 + 1e-12)) throw InvalidInput("bunch width H/rho exceeds the period L");
}

double bunch_energy_1p1_unchecked(double H, double rho, double L, const ModelCoefficients& c) {
  return c.c1 * L * H * H * std::log(kPi * H / (L * rho)) +
         c.a * L * H * (c.c1 * std::log(rho) + c.c2 + c.c3 * rho * rho);
}

double bunch_energy_1p1(const BunchProfile& p, const ModelCoefficients& c) {
  p.validate();
  return bunch_energy_1p1_unchecked(p.H, p.rho, p.L, c);
}

double bunch_first_term(const BunchProfile& p, const ModelCoefficients& c) {
  p.validate();
  return c.c1 * p.L * p.H * p.H * std::log(kPi * p.H / (p.L * p.rho));
}

double bunch_rho_star(const ModelCoefficients& c, double H) {
  if (!(H > 0.0) || !(c.a > 0.0)) throw InvalidInput("rho* needs H > 0 and a > 0");
  return std::sqrt(c.c1 * H / (2.0 * c.c3)) / std::sqrt(c.a);
}

double bunch_double_integral_oracle(const BunchProfile& p, const ModelCoefficients& c) {
  p.validate();
  const double W = p.H / p.rho;
  // |sin| vanishes at s = 0 and, if the bunch fills the cell, at s = L.
  auto f = [&](double s) { return (W - s) * std::log(std::abs(std::sin(kPi * s / p.L))); };
  const bool full = W >= p.L * (1.0 - 1e-12);
  const double I = 2.0 * graded_integral(f, 0.0, W, true, full);
  return c.c1 * p.L * p.rho * p.rho * I;
}

double bunch_double_integral_series(const BunchProfile& p, const ModelCoefficients& c, int terms) {
  p.validate();
  const double W = p.H / p.rho;
  // Sum small terms first.
  double s = 0.0;
  for (int k = terms; k >= 1; --k) {
    const double sn = std::sin(kPi * k * W / p.L);
    const double q = p.L / (kPi * k);
    s += q * q * sn * sn / k;
  }
  // Tail beyond `terms`: sin^2 averages 1/2, sum_{k>K} 1/k^3 ~ 1/(2K^2).
  const double K = terms;
  s += 0.5 * (p.L / kPi) * (p.L / kPi) * 0.5 / (K * K + K);
  const double I = -W * W * std::log(2.0) - s;
  return c.c1 * p.L * p.rho * p.rho * I;
}

double bunch_height(const BunchProfile& p, double x) {
  const double w = p.H / (2.0 * p.rho);
  const double d = x - 0.5 * p.L;
  if (d < -w) return -0.5 * p.H;
  if (d > w) return 0.5 * p.H;
  return p.rho * d;
}

}  // namespace stepflow
