#include "stepflow/coefficients.hpp"

#include <cmath>
#include <numbers>

#include "stepflow/errors.hpp"

namespace stepflow {

ModelCoefficients ModelCoefficients::nondimensional(double c1, double c2, double c3, double a) {
  if (!(c1 > 0.0) || !(c3 > 0.0) || !(a > 0.0) || !std::isfinite(c2)) {
    throw InvalidInput("nondimensional coefficients need c1 > 0, c3 > 0, a > 0");
  }
  ModelCoefficients c;
  c.c1 = c1;
  c.c2 = c2;
  c.c3 = c3;
  c.a = a;
  c.gamma0 = std::exp(-c2 / c1);
  c.beta = beta_for(c1, c3, c.gamma0);
  return c;
}

double misfit_stress(const PhysicalParams& p) {
  return 2.0 * p.G * (1.0 + p.nu) * p.eps0 / (1.0 - p.nu);
}

bool beta_first_branch(double c1, double c3, double gamma0) {
  return std::sqrt(c1 / (3.0 * c3)) >= gamma0;
}

double beta_for(double c1, double c3, double gamma0) {
  if (beta_first_branch(c1, c3, gamma0)) {
    const double r = 3.0 * c3 / c1;
    return 2.0 * std::sqrt(r) - r * gamma0;
  }
  return 1.0 / gamma0;
}

ModelCoefficients derive_coefficients(const PhysicalParams& p) {
  if (!(p.nu > 0.0 && p.nu < 0.5)) throw InvalidInput("Poisson ratio must lie in (0, 0.5)");
  if (!(p.g3 > 0.0)) throw InvalidInput("g3 must be positive");
  if (!(p.a > 0.0)) throw InvalidInput("lattice constant a must be positive");
  if (!(p.G > 0.0)) throw InvalidInput("shear modulus G must be positive");
  if (!(p.r_c > 0.0)) throw InvalidInput("core size r_c must be positive");
  if (!(p.g1 >= 0.0)) throw InvalidInput("g1 must be non-negative");

  const double sigma0 = misfit_stress(p);
  const double c1 = (1.0 - p.nu) * sigma0 * sigma0 / (2.0 * std::numbers::pi * p.G);
  if (!(c1 > 0.0)) throw InvalidInput("zero misfit: c1 = 0, the misfit-free limit is not modelled");

  ModelCoefficients c;
  c.sigma0 = sigma0;
  c.c1 = c1;
  c.c2 = p.g1 / p.a + c1 * std::log(2.0 * std::numbers::pi * p.r_c / (std::numbers::e * p.a));
  c.c3 = p.g3 / (3.0 * p.a);
  c.a = p.a;
  c.gamma0 = std::exp(-c.c2 / c.c1);
  c.beta = beta_for(c.c1, c.c3, c.gamma0);
  return c;
}

std::optional<PhysicalParams> physical_preset(std::string_view name) {
  PhysicalParams p;
  p.a = 0.27e-9;
  p.nu = 0.25;
  p.G = 3.8e10;
  p.r_c = p.a;
  p.eps0 = 0.012;
  if (name == "baseline") {
    p.g1 = 0.03;
    p.g3 = 8.58;
  } else if (name == "si113") {
    p.g1 = 0.3382;
    p.g3 = 5767.8;
  } else if (name == "si111") {
    p.g1 = 0.1778;
    p.g3 = 0.8011;
  } else {
    return std::nullopt;
  }
  return p;
}

}  // namespace stepflow
