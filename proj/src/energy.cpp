#include "stepflow/energy.hpp"

#include <cmath>

#include "stepflow/kernels.hpp"

namespace stepflow {

EnergyBreakdown total_energy(const ScalarField& f, const ModelCoefficients& c) {
  const VectorField g = padded_full_gradient(f);
  const auto k = kernels::Coeffs::from(c);
  const auto s = kernels::active().density(g.x1.data(), g.x2.data(), g.x1.size(), k);
  const double w = g.grid.cell_area();

  EnergyBreakdown e;
  e.nonlocal = -nonlocal_energy(f, c.c1);
  e.local_bracket = c.a * w * s.r_bracket;
  e.local_linear = c.a * c.c2 * w * s.r;
  e.local_log = e.local_bracket - e.local_linear;
  e.local_cubic = c.a * c.c3 * w * s.r3;
  e.total = e.nonlocal + e.local_bracket + e.local_cubic;
  return e;
}

ScalarField chemical_potential_nonlocal(const ScalarField& f, const ModelCoefficients& c) {
  const ScalarField k = nonlocal_kernel_apply(f);
  std::vector<double> v(k.values().begin(), k.values().end());
  for (auto& x : v) x *= -c.c1;
  return ScalarField::from_unnormalized(f.grid(), std::move(v));
}

ScalarField chemical_potential(const ScalarField& f, const ModelCoefficients& c) {
  const VectorField g = padded_full_gradient(f);
  VectorField z = VectorField::zero(g.grid);
  kernels::active().flux(g.x1.data(), g.x2.data(), z.x1.data(), z.x2.data(), g.x1.size(), kernels::Coeffs::from(c));
  const ScalarField div = truncated_divergence(z, f.grid());
  const ScalarField k = nonlocal_kernel_apply(f);

  std::vector<double> mu(f.grid().size());
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = -c.c1 * k.values()[i] - div.values()[i];
  return ScalarField::from_unnormalized(f.grid(), std::move(mu));
}

double coercivity_constant(const ModelCoefficients& c, Vec2 B, double L) {
  // For |p| = t the cubic term is smallest with p antiparallel to B, so the
  // 2-D minimum reduces to min_t a c3 |t - b|^3 - c1 L t^2. It is decreasing
  // on [0, b]; on t > b the stationary point solves a quadratic in s = t - b.
  const double b = std::hypot(B[0], B[1]);
  const double A = 3.0 * c.a * c.c3;
  const double q = 2.0 * c.c1 * L;
  const double s = (q + std::sqrt(q * q + 4.0 * A * q * b)) / (2.0 * A);
  const double t = b + s;
  const double m = c.a * c.c3 * s * s * s - c.c1 * L * t * t;
  return -m;
}

}  // namespace stepflow
