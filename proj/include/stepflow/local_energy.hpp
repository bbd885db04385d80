#pragma once

// Slope densities
//   Psi0(p) = a c1 |p| log|p|          + a c2 |p| + a c3 |p|^3
//   Psi(p)  = a c1 |p| log(|p| + gamma0) + a c2 |p| + a c3 |p|^3
// and the flux zeta = grad Psi. Both densities are radial, so everything is
// written in terms of r = |p| and phi(r).

#include <array>

#include "stepflow/coefficients.hpp"
#include "stepflow/field.hpp"

namespace stepflow {

using Slope = Vec2;

struct HessianSample {
  Slope p{};
  double h11 = 0.0;
  double h12 = 0.0;
  double h22 = 0.0;
  double eigmin = 0.0;
  double eigmax = 0.0;

  /// Spectral norm (largest |eigenvalue|).
  double norm() const;
};

double psi0(Slope p, const ModelCoefficients& c);
double psi(Slope p, const ModelCoefficients& c);
/// Psi as a function of r = |p|.
double psi_radial(double r, const ModelCoefficients& c);

/// zeta(p) = grad Psi(p); zeta(0) = 0. Uses the two-term Taylor form for
/// |p| < 1e-4 gamma0.
Slope zeta(Slope p, const ModelCoefficients& c);

/// Closed-form Hessians. Throw SingularPoint at p = 0.
HessianSample hessian_psi(Slope p, const ModelCoefficients& c);
HessianSample hessian_psi0(Slope p, const ModelCoefficients& c);

/// Symmetric 2x2 eigenvalues (min, max).
std::array<double, 2> sym_eigenvalues(double h11, double h12, double h22);

}  // namespace stepflow
