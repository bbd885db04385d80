#include "stepflow/local_energy.hpp"

#include <algorithm>
#include <cmath>

#include "stepflow/errors.hpp"

namespace stepflow {
namespace {

// c1 log(r + gamma0) + c2, written so that it does not cancel near r = 0.
double bracket(double r, const ModelCoefficients& c) { return c.c1 * std::log1p(r / c.gamma0); }

HessianSample assemble(Slope p, double r, double radial_dd, double radial_d_over_r) {
  // H = phi'' p p^T / r^2 + (phi'/r) (I - p p^T / r^2). Expanded componentwise
  // this is the usual three-line formula for d11, d12, d22.
  const double u1 = p[0] / r;
  const double u2 = p[1] / r;
  HessianSample s;
  s.p = p;
  s.h11 = radial_dd * u1 * u1 + radial_d_over_r * u2 * u2;
  s.h22 = radial_dd * u2 * u2 + radial_d_over_r * u1 * u1;
  s.h12 = (radial_dd - radial_d_over_r) * u1 * u2;
  const auto ev = sym_eigenvalues(s.h11, s.h12, s.h22);
  s.eigmin = ev[0];
  s.eigmax = ev[1];
  return s;
}

}  // namespace

double HessianSample::norm() const { return std::max(std::abs(eigmin), std::abs(eigmax)); }

std::array<double, 2> sym_eigenvalues(double h11, double h12, double h22) {
  const double mean = 0.5 * (h11 + h22);
  const double rad = std::hypot(0.5 * (h11 - h22), h12);
  // The smaller root loses digits when mean ~ rad; recover it from the
  // determinant instead.
  const double big = mean >= 0.0 ? mean + rad : mean - rad;
  const double det = h11 * h22 - h12 * h12;
  const double other = big != 0.0 ? det / big : 0.0;
  return {std::min(big, other), std::max(big, other)};
}

double psi0(Slope p, const ModelCoefficients& c) {
  const double r = std::hypot(p[0], p[1]);
  if (r == 0.0) return 0.0;
  return c.a * (c.c1 * r * std::log(r) + c.c2 * r + c.c3 * r * r * r);
}

double psi_radial(double r, const ModelCoefficients& c) {
  return c.a * (r * bracket(r, c) + c.c3 * r * r * r);
}

double psi(Slope p, const ModelCoefficients& c) { return psi_radial(std::hypot(p[0], p[1]), c); }

Slope zeta(Slope p, const ModelCoefficients& c) {
  const double r = std::hypot(p[0], p[1]);
  double f;
  if (r < 1e-4 * c.gamma0) {
    f = 2.0 * c.c1 / c.gamma0 + r * (3.0 * c.c3 - 1.5 * c.c1 / (c.gamma0 * c.gamma0));
  } else {
    f = bracket(r, c) / r + c.c1 / (r + c.gamma0) + 3.0 * c.c3 * r;
  }
  return {c.a * f * p[0], c.a * f * p[1]};
}

HessianSample hessian_psi(Slope p, const ModelCoefficients& c) {
  const double r = std::hypot(p[0], p[1]);
  if (r == 0.0) throw SingularPoint("Hessian of Psi requested at p = 0");
  const double rg = r + c.gamma0;
  const double dd = c.a * (c.c1 / rg + c.c1 * c.gamma0 / (rg * rg) + 6.0 * c.c3 * r);
  const double d_r = c.a * (bracket(r, c) / r + c.c1 / rg + 3.0 * c.c3 * r);
  return assemble(p, r, dd, d_r);
}

HessianSample hessian_psi0(Slope p, const ModelCoefficients& c) {
  const double r = std::hypot(p[0], p[1]);
  if (r == 0.0) throw SingularPoint("Hessian of Psi0 requested at p = 0");
  const double dd = c.a * (c.c1 / r + 6.0 * c.c3 * r);
  const double d_r = c.a * ((c.c1 * std::log(r) + c.c1 + c.c2) / r + 3.0 * c.c3 * r);
  return assemble(p, r, dd, d_r);
}

}  // namespace stepflow
