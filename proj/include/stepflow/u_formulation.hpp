#pragma once

// Divergence potential u with h = div u + B.x. u is only defined up to a
// divergence-free field; build_u_from_h picks the explicit line-integral
// construction
//   u1 = 1/2 int_0^x1 (h~ - m1(x2)) ds + 1/2 int_0^x1 m2(s) ds - n1
//   u2 = 1/2 int_0^x2 (h~ - m2(x1)) ds + 1/2 int_0^x2 m1(s) ds - n2
// with m1, m2 the line means of h~ along x1 and x2 and n_i zeroing the means.

#include "stepflow/coefficients.hpp"
#include "stepflow/energy.hpp"
#include "stepflow/field.hpp"

namespace stepflow {

enum class CumulativeRule {
  // Exact antiderivative of the trigonometric interpolant; div u = h~ to
  // rounding.
  Spectral,
  // Cumulative trapezoid along grid lines; div u = h~ + O(spacing^2).
  Trapezoid,
};

VectorField build_u_from_h(const ScalarField& f, CumulativeRule rule = CumulativeRule::Spectral);

/// h~ = div u (spectral).
ScalarField h_from_u(const VectorField& u, Vec2 B);

/// F[u] = E[div u + B.x].
EnergyBreakdown total_energy_u(const VectorField& u, Vec2 B, const ModelCoefficients& c);

}  // namespace stepflow
