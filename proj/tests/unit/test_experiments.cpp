#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "stepflow/errors.hpp"
#include "stepflow/experiments.hpp"
#include "stepflow/local_energy.hpp"
#include "stepflow/random_field.hpp"

using namespace stepflow;
using testing::kPi;
using testing::rel;

namespace {

ModelCoefficients unit_with_a(double a) { return ModelCoefficients::nondimensional(1.0, 1.0, 1.0, a); }

std::vector<double> a_decades(double hi, double lo, int per_decade) {
  std::vector<double> out;
  const int n = static_cast<int>(std::round(std::log10(hi / lo) * per_decade));
  for (int i = 0; i <= n; ++i) out.push_back(hi * std::pow(10.0, -static_cast<double>(i) / per_decade));
  return out;
}

}  // namespace

TEST_CASE("meander profile validation") {
  CHECK_THROWS_AS(MeanderProfile({-1.0, 2 * kPi, 1.0}).validate(1.0), InvalidInput);
  CHECK_THROWS_AS(MeanderProfile({1.0, 2 * kPi, 0.0}).validate(1.0), InvalidInput);
  CHECK_THROWS_AS(MeanderProfile({1.0, 3.0, 1.0}).validate(1.0), InvalidInput);
  CHECK_NOTHROW(MeanderProfile({0.0, 4 * kPi, 1.0}).validate(1.0));
}

TEST_CASE("meander energy limits") {
  const auto c = unit_with_a(0.1);
  const auto e0 = meander_energy({0.0, 2 * kPi / 1.5, 0.8}, c, 1.5, 64);
  CHECK(rel(e0.total, 1.5 * 1.5 * psi({0.8, 0.0}, c)) < 1e-14);
  const MeanderProfile p{0.4, 2 * kPi / 1.5, 0.8};
  const auto e = meander_energy(p, c, 1.5, 256);
  CHECK(rel(e.nonlocal, -c.c1 * kPi * 1.5 * 1.5 / 2 * 0.16 * 0.64 * p.omega) < 1e-14);
  // Psi0 and Psi agree to gamma0-order at slopes of order one
  const auto small_g = ModelCoefficients::nondimensional(1.0, 10.0, 1.0, 0.1);
  CHECK(rel(meander_energy_psi0(p, small_g, 1.5, 256), meander_energy(p, small_g, 1.5, 256).total) < 1e-3);
}

TEST_CASE("meander energy in the asymptotic regime") {
  const double omega = 2 * kPi;
  for (double a : {1e-3, 1e-4}) {
    const auto c = unit_with_a(a);
    const MeanderProfile p{dominant_balance_amplitude(c, omega, 1.0), omega, 1.0};
    const double e = meander_energy(p, c, 1.0, 4096).total;
    CHECK(rel(e, meander_leading_energy(c, omega, 1.0)) < 0.10);
  }
  CHECK(meander_leading_energy(unit_with_a(1e-3), omega, 1.0) ==
        doctest::Approx(-std::pow(kPi, 5) / (96 * std::pow(omega, 3)) * 1e6).epsilon(1e-14));
}

TEST_CASE("dominant balance scalings") {
  const auto c = unit_with_a(1e-3);
  const double A1 = dominant_balance_amplitude(c, 2 * kPi, 1.0);
  CHECK(A1 == doctest::Approx(kPi * kPi / (4 * 4 * kPi * kPi) * 1e3).epsilon(1e-14));
  CHECK(dominant_balance_amplitude(c, 4 * kPi, 1.0) == doctest::Approx(A1 / 4).epsilon(1e-14));
  CHECK(dominant_balance_amplitude(unit_with_a(1e-4), 2 * kPi, 1.0) == doctest::Approx(A1 * 10).epsilon(1e-14));
}

TEST_CASE("golden-section minimum of the meander family") {
  const double omega = 2 * kPi;
  for (double a : {1e-3, 3e-4, 1e-4}) {
    const auto c = unit_with_a(a);
    const auto m = minimize_meander_amplitude(c, omega, 1.0, 1.0, 1024);
    CHECK(rel(m.A, dominant_balance_amplitude(c, omega, 1.0)) < 0.05);
    // local minimality against the family
    for (double f : {0.9, 0.99, 1.01, 1.1}) CHECK(m.energy <= meander_energy({m.A * f, omega, 1.0}, c, 1.0, 1024).total);
    CHECK(std::abs(meander_first_order_residual({m.A, omega, 1.0}, c, 1.0, 1024)) < 1e-5);
  }
  // The first-order condition is not satisfied away from the minimum.
  const auto c = unit_with_a(1e-3);
  CHECK(std::abs(meander_first_order_residual({0.5 * dominant_balance_amplitude(c, omega, 1.0), omega, 1.0}, c, 1.0, 1024)) > 0.1);
}

TEST_CASE("upper-bound scaling scan") {
  const auto c = unit_with_a(1.0);
  const double omega = 2 * kPi;
  const auto r = upper_bound_scaling_scan(c, omega, 1.0, 1.0, a_decades(1e-1, 1e-4, 3));
  REQUIRE(r.points.size() == 10);
  CHECK(r.fit_points == 7);
  CHECK(std::abs(r.slope + 2.0) < 0.05);
  CHECK(rel(r.prefactor_at_smallest, r.reference_prefactor) < 0.10);
  CHECK(rel(r.reference_prefactor, std::pow(kPi, 5) / (96 * std::pow(omega, 3))) < 1e-14);
  for (const auto& p : r.points) {
    CHECK(p.energy >= p.lower_bound);
    CHECK(p.energy < 0.0);
  }
  // Psi vs Psi0 at the computed minimizers: the regularisation does not move
  // the asymptotics.
  CHECK(rel(r.points.back().energy_psi0, r.points.back().energy) < 1e-3);

  // c3 -> 8 c3 shrinks the prefactor by 64.
  const auto c8 = ModelCoefficients::nondimensional(1.0, 1.0, 8.0, 1.0);
  const auto r8 = upper_bound_scaling_scan(c8, omega, 1.0, 1.0, a_decades(1e-2, 1e-4, 2));
  CHECK(rel(r8.reference_prefactor * 64, r.reference_prefactor) < 1e-14);
  CHECK(rel(r8.prefactor_at_smallest * 64, r.prefactor_at_smallest) < 0.1);

  CHECK_THROWS_AS(upper_bound_scaling_scan(c, omega, 1.0, 1.0, {1e-2}), InvalidInput);
}

TEST_CASE("lower bound") {
  const auto c = unit_with_a(1e-2);
  for (double B : {0.0, 0.5, 1.0}) {
    for (double L : {1.0, 2.0}) {
      const auto lb = lower_bound(c, B, L);
      const double rs = c.c1 * L / (3 * c.c3 * c.a) + 2 * B;
      CHECK(rel(lb.r_star, rs) < 1e-14);
      // g'(r*) = 0 and r* is the global minimum over r >= 0
      const double r = lb.r_star;
      const double dg = -c.c1 * L * r + 3 * c.a * c.c3 * r * r - 6 * c.a * c.c3 * B * r;
      CHECK(std::abs(dg) <= 1e-10 * c.c1 * L * r);
      for (int i = 0; i <= 200; ++i) CHECK(lower_bound_g(rs * i / 100.0, c, B, L) >= lower_bound_g(rs, c, B, L));
      CHECK(rel(lb.full, L * L * lower_bound_g(rs, c, B, L) - c.a * c.c3 * B * B * B * L * L) < 1e-12);
      CHECK(rel(lb.leading_constant, c.c1 * c.c1 * c.c1 * std::pow(L, 5) / (54 * c.c3 * c.c3)) < 1e-14);
    }
  }
  // B = 0 leaves only the a^-2 term
  const auto lb0 = lower_bound(c, 0.0, 1.0);
  CHECK(rel(lb0.full, -lb0.leading_constant / (c.a * c.a)) < 1e-12);
}

TEST_CASE("lower bound sandwiches gridded energies") {
  const auto c = unit_with_a(0.05);
  const double B = 0.6, L = 1.0;
  const double lb = lower_bound(c, B, L).full;
  for (std::uint64_t s = 0; s < 12; ++s) {
    const double amp = 0.02 * std::pow(2.0, static_cast<double>(s));
    const auto f = random_smooth_field(Grid::make(32, L), {B, 0.0}, amp, 6, 700 + s);
    CHECK(total_energy(f, c).total >= lb);
  }
}

TEST_CASE("bunch profile and closed form") {
  CHECK_THROWS_AS(BunchProfile({1.0, 0.5, 1.0}).validate(), InvalidInput);
  CHECK_THROWS_AS(BunchProfile({0.0, 1.0, 1.0}).validate(), InvalidInput);
  const auto c = unit_with_a(1e-3);
  const BunchProfile p{0.1 * kPi, kPi, 1.0};
  // rho = pi H / L zeroes the log of the first term
  CHECK(std::abs(bunch_first_term({0.2, 0.2 * kPi, 1.0}, c)) < 1e-15);
  CHECK(rel(bunch_energy_1p1(p, c) - bunch_first_term(p, c), c.a * p.L * p.H * (std::log(p.rho) + 1.0 + p.rho * p.rho)) < 1e-13);
  CHECK(rel(bunch_rho_star(c, 2.0), std::sqrt(1.0 / 1e-3)) < 1e-14);
  CHECK(bunch_height(p, 0.0) == -0.5 * p.H);
  CHECK(bunch_height(p, 1.0) == 0.5 * p.H);
  CHECK(bunch_height(p, 0.5) == 0.0);
}

TEST_CASE("log-sine double integral: quadrature vs series") {
  const auto c = unit_with_a(1e-3);
  for (const BunchProfile& p : {BunchProfile{0.5, 1.0, 1.0}, BunchProfile{0.3, 3.0, 2.0}, BunchProfile{1.0, 1.0, 1.0}, BunchProfile{0.01, 4.0, 1.0}}) {
    const double q = bunch_double_integral_oracle(p, c);
    const double s = bunch_double_integral_series(p, c, 400000);
    CHECK(rel(q, s) < 1e-10);
  }
  // W = L: the series collapses to -L^2 log 2
  const BunchProfile full{1.0, 1.0, 1.0};
  CHECK(rel(bunch_double_integral_oracle(full, c), -c.c1 * std::log(2.0)) < 1e-12);
}

TEST_CASE("closed-form first term vs the double integral") {
  // The double integral equals H^2 (log(pi H / (L rho)) - 3/2) + O((H/(rho L))^2),
  // so the closed form's first term is off by -(3/2) c1 L H^2.
  const auto c = unit_with_a(1.0);
  for (double W : {1e-2, 1e-3, 1e-4}) {
    const BunchProfile p{1.0, 1.0 / W, 1.0};
    const double gap = (bunch_double_integral_oracle(p, c) - bunch_first_term(p, c)) / (c.c1 * p.L * p.H * p.H);
    CHECK(std::abs(gap + 1.5) < W * W + 1e-9);
  }
}

TEST_CASE("bunch energy grows like (c1 L H^2 / 2) log a") {
  const double H = 0.2, L = 1.0;
  std::vector<double> x, y;
  for (double a : {1e-6, 1e-7, 1e-8, 1e-9, 1e-10}) {
    const auto c = unit_with_a(a);
    const BunchProfile p{H, bunch_rho_star(c, H), L};
    x.push_back(std::log(a));
    y.push_back(bunch_energy_1p1(p, c));
  }
  const double slope = (y.back() - y.front()) / (x.back() - x.front());
  CHECK(rel(slope, 0.5 * L * H * H) < 0.05);
}

TEST_CASE("transition sweeps") {
  const auto m = *physical_preset("baseline");
  TransitionSweep lt;
  lt.points = 40;
  const auto r = transition_scan(lt, m);
  CHECK(r.rows.size() == 40);
  CHECK(r.sign_changes == 1);
  CHECK(r.crossings.size() == 1);
  CHECK(r.bunching_at_small_end);
  CHECK(r.rows.front().diff > 0.0);
  CHECK(r.rows.back().diff < 0.0);
  // the bisected root really is a root
  const auto at = transition_point(lt, m, r.crossings.front());
  CHECK(std::abs(at.diff) < 1e-6 * std::abs(at.e11));

  TransitionSweep eps;
  eps.vary = SweepVariable::Misfit;
  eps.N = 10;
  eps.lt_over_a = 80;
  eps.lo = 0.004;
  eps.hi = 0.03;
  eps.points = 40;
  const auto re = transition_scan(eps, m);
  CHECK(re.sign_changes == 1);
  CHECK(re.bunching_at_small_end);

  // A window that misses the crossing reports none.
  TransitionSweep narrow = lt;
  narrow.lo = 40;
  narrow.hi = 160;
  const auto rn = transition_scan(narrow, m);
  CHECK(rn.sign_changes == 0);
  CHECK(rn.crossings.empty());
  CHECK_FALSE(rn.bunching_at_small_end);

  TransitionSweep zero = lt;
  zero.eps0 = 0.0;
  CHECK_THROWS_AS(transition_point(zero, m, 10.0), InvalidInput);
  CHECK_THROWS_AS(transition_point(eps, m, 0.0), InvalidInput);
}

TEST_CASE("csv writers") {
  const auto dir = std::filesystem::temp_directory_path() / "stepflow_test_experiments";
  std::filesystem::create_directories(dir);
  const auto r = upper_bound_scaling_scan(unit_with_a(1.0), 2 * kPi, 1.0, 1.0, {1e-2, 1e-3, 1e-4}, 256, 2.0);
  write_scaling_csv(r, dir / "s.csv");
  std::ifstream in(dir / "s.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header.find("energy") != std::string::npos);
  std::size_t lines = 0;
  for (std::string s; std::getline(in, s);) ++lines;
  CHECK(lines == 3);
  CHECK_THROWS(write_scaling_csv(r, dir / "no_such_dir" / "s.csv"));
  std::filesystem::remove_all(dir);
}
