#pragma once

#include <optional>
#include <string_view>

namespace stepflow {

/// Material inputs in SI units.
struct PhysicalParams {
  double g1 = 0.0;    // step line energy density [J/m^2]
  double g3 = 0.0;    // force-dipole strength [J/m^2]
  double a = 0.0;     // lattice constant [m]
  double nu = 0.0;    // Poisson ratio
  double G = 0.0;     // shear modulus [Pa]
  double r_c = 0.0;   // step core size [m]
  double eps0 = 0.0;  // lattice misfit
};

/// Coefficients of the regularized local density
///   Psi(p) = a c1 |p| log(|p| + gamma0) + a c2 |p| + a c3 |p|^3
/// and of the nonlocal misfit term. `sigma0` is only known when the set was
/// derived from physical parameters.
struct ModelCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double gamma0 = 0.0;
  double beta = 0.0;
  double a = 0.0;
  std::optional<double> sigma0;

  /// Free dimensionless set; gamma0 and beta follow from c1, c2, c3.
  static ModelCoefficients nondimensional(double c1, double c2, double c3, double a);

  /// a*c1*beta: uniform lower bound on the Hessian of Psi.
  double strict_convexity_modulus() const { return a * c1 * beta; }

  /// Contraction rate a c1 beta - c1 L of the u-flow on a cell of side L.
  double lambda(double L) const { return a * c1 * beta - c1 * L; }
};

/// sigma0 = 2G(1+nu) eps0 / (1-nu).
double misfit_stress(const PhysicalParams& p);

/// Throws InvalidInput on nu outside (0, 0.5), non-positive g3, a, G, r_c,
/// negative g1, or zero misfit (c1 = 0 makes gamma0 undefined).
ModelCoefficients derive_coefficients(const PhysicalParams& p);

/// Piecewise well-posedness constant:
///   2 sqrt(3c3/c1) - (3c3/c1) gamma0   if sqrt(c1/(3c3)) >= gamma0
///   1/gamma0                            otherwise
double beta_for(double c1, double c3, double gamma0);

/// True when beta_for takes its first (square-root) branch.
bool beta_first_branch(double c1, double c3, double gamma0);

/// Named material presets: "baseline", "si113", "si111".
std::optional<PhysicalParams> physical_preset(std::string_view name);

}  // namespace stepflow
