#pragma once

// E[h] = -2 pi^2 c1 L [h~]^2 + int Psi(grad h) and its H^-1 chemical
// potential. This module owns every sign; field returns unsigned pieces.
//
// Local integrals are taken on the 2n zero-padded grid. mu is built from the
// same padded samples (mu_loc = -truncate(div zeta)), which makes it the exact
// gradient of the discrete energy rather than an approximation of it.

#include "stepflow/coefficients.hpp"
#include "stepflow/field.hpp"

namespace stepflow {

struct EnergyBreakdown {
  double nonlocal = 0.0;      // -2 pi^2 c1 L [h~]^2
  double local_log = 0.0;     // a c1 int |grad h| log(|grad h| + gamma0)
  double local_linear = 0.0;  // a c2 int |grad h|
  double local_cubic = 0.0;   // a c3 int |grad h|^3
  double total = 0.0;

  /// local_log + local_linear, computed without cancellation.
  double local_bracket = 0.0;
};

EnergyBreakdown total_energy(const ScalarField& f, const ModelCoefficients& c);

/// mu = -c1 (K * grad h) - div zeta(grad h), mean zero.
ScalarField chemical_potential(const ScalarField& f, const ModelCoefficients& c);

/// Nonlocal part of mu alone, -c1 (K * grad h).
ScalarField chemical_potential_nonlocal(const ScalarField& f, const ModelCoefficients& c);

/// C = -min_p { a c3 |p + B|^3 - c1 L |p|^2 }, the constant in
/// E[h] >= (c1/2) L ||grad h~||^2 - C L^2.
double coercivity_constant(const ModelCoefficients& c, Vec2 B, double L);

}  // namespace stepflow
