#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "stepflow/energy.hpp"
#include "stepflow/experiments.hpp"
#include "stepflow/local_energy.hpp"
#include "stepflow/random_field.hpp"

using namespace stepflow;
using testing::add_scaled;
using testing::kPi;
using testing::rel;

namespace {

const ModelCoefficients kNd = ModelCoefficients::nondimensional(1.0, 1.0, 1.0, 0.05);

double grad_norm_sq(const ScalarField& f) { return l2_norm_sq(gradient(f)); }

}  // namespace

TEST_CASE("flat surface energy is L^2 Psi(B)") {
  const double L = 2.5;
  const Vec2 B{0.6, -0.3};
  const auto e = total_energy(ScalarField::zero(Grid::make(16, L), B), kNd);
  CHECK(e.nonlocal == 0.0);
  CHECK(rel(e.total, L * L * psi(B, kNd)) < 1e-14);
  CHECK(chemical_potential(ScalarField::zero(Grid::make(16, L), B), kNd).max_abs() < 1e-14);
}

TEST_CASE("breakdown pieces") {
  const auto f = random_smooth_field(Grid::make(32, 1.0), {0.2, 0.1}, 0.1, 6, 4);
  const auto e = total_energy(f, kNd);
  CHECK(e.nonlocal < 0.0);
  CHECK(e.local_cubic > 0.0);
  CHECK(e.local_bracket >= 0.0);
  CHECK(rel(e.local_bracket, e.local_log + e.local_linear) < 1e-10);
  CHECK(rel(e.total, e.nonlocal + e.local_bracket + e.local_cubic) < 1e-14);
  CHECK(rel(e.nonlocal, -nonlocal_energy(f, kNd.c1)) < 1e-14);
}

TEST_CASE("gridded meander matches the 1-D quadrature") {
  const double L = 1.0;
  for (double A : {0.05, 0.5, 2.0}) {
    const MeanderProfile p{A, 2 * kPi * 2 / L, 0.7};
    const auto f = meander_field(p, Grid::make(64, L));
    const auto grid = total_energy(f, kNd);
    const auto quad = meander_energy(p, kNd, L, 4096);
    CHECK(rel(grid.total, quad.total) < 1e-6);
    CHECK(rel(grid.nonlocal, -kNd.c1 * kPi * L * L / 2 * A * A * p.B * p.B * p.omega) < 1e-10);
  }
}

TEST_CASE("variational identity") {
  const Grid g = Grid::make(32, 1.3);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto f = random_smooth_field(g, {0.3, -0.2}, 0.2, 6, 40 + s);
    const auto v = random_smooth_field(g, {0, 0}, 1.0, 6, 60 + s);
    const double eps = 1e-5;
    const double d = (total_energy(add_scaled(f, v, eps), kNd).total - total_energy(add_scaled(f, v, -eps), kNd).total) / (2 * eps);
    CHECK(rel(d, inner_product(chemical_potential(f, kNd), v)) < 1e-6);
  }
}

TEST_CASE("chemical potential structure") {
  const auto f = random_smooth_field(Grid::make(32, 2.0), {0.4, 0.0}, 0.3, 6, 71);
  const auto mu = chemical_potential(f, kNd);
  CHECK(std::abs(mu.mean()) < 1e-12 * mu.max_abs());
  // translation covariance
  const auto mus = chemical_potential(f.shifted(3, 7), kNd);
  CHECK(testing::max_diff(mus, mu.shifted(3, 7)) < 1e-11 * mu.max_abs());
  // the nonlocal part is linear
  const auto g = random_smooth_field(f.grid(), {0, 0}, 0.3, 6, 72);
  const auto a = chemical_potential_nonlocal(add_scaled(f, g, 2.0), kNd);
  const auto b = add_scaled(chemical_potential_nonlocal(f, kNd), chemical_potential_nonlocal(g, kNd), 2.0);
  CHECK(testing::max_diff(a, b) < 1e-12 * a.max_abs());
  const auto kh = nonlocal_kernel_apply(f);
  CHECK(testing::max_diff(chemical_potential_nonlocal(f, kNd), add_scaled(ScalarField::zero(f.grid()), kh, -kNd.c1)) < 1e-13);
}

TEST_CASE("translation invariance of the energy") {
  const auto f = random_smooth_field(Grid::make(32, 1.0), {0.5, 0.5}, 0.2, 6, 9);
  CHECK(rel(total_energy(f.shifted(11, -4), kNd).total, total_energy(f, kNd).total) < 1e-12);
}

TEST_CASE("coercivity") {
  const auto c = ModelCoefficients::nondimensional(1.0, 1.0, 1.0, 0.2);
  const double L = 1.0;
  const Vec2 B{0.5, 0.2};
  const double C = coercivity_constant(c, B, L);

  // brute-force min over a polar grid in p
  double worst = -1e300;
  for (int i = 0; i <= 4000; ++i) {
    const double t = 40.0 * i / 4000;
    for (int k = 0; k < 360; ++k) {
      const double th = 2 * kPi * k / 360;
      const double q1 = t * std::cos(th) + B[0], q2 = t * std::sin(th) + B[1];
      const double v = c.a * c.c3 * std::pow(std::hypot(q1, q2), 3) - c.c1 * L * t * t;
      worst = std::max(worst, -v);
    }
  }
  CHECK(C >= worst);
  CHECK(rel(C, worst) < 1e-3);

  for (std::uint64_t s = 0; s < 10; ++s) {
    const double amp = 0.05 * std::pow(2.0, static_cast<double>(s));
    const auto f = random_smooth_field(Grid::make(32, L), B, amp, 5, 90 + s);
    CHECK(total_energy(f, c).total >= 0.5 * c.c1 * L * grad_norm_sq(f) - C * L * L);
  }
}

TEST_CASE("midpoint convexity when L/a < beta") {
  const auto c = ModelCoefficients::nondimensional(1.0, 1.0, 1.0, 5.0);
  const double L = 2 * kPi;
  REQUIRE(L / c.a < c.beta);
  const double lam = c.lambda(L);
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto f = random_smooth_field(Grid::make(32, L), {0.3, 0.0}, 0.5, 6, 300 + s);
    const auto g = random_smooth_field(Grid::make(32, L), {0.3, 0.0}, 0.5, 6, 400 + s);
    const auto mid = add_scaled(f, add_scaled(g, f, -1.0), 0.5);
    const auto d = add_scaled(f, g, -1.0);
    const double gap = 0.5 * (total_energy(f, c).total + total_energy(g, c).total) - total_energy(mid, c).total;
    CHECK(gap >= lam / 8 * grad_norm_sq(d) * (1 - 1e-9));
  }
}
