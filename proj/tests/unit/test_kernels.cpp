#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "stepflow/kernels.hpp"
#include "stepflow/local_energy.hpp"
#include "stepflow/random_field.hpp"

using namespace stepflow;
using testing::rel;

namespace {

// Slopes spanning the Taylor region, p = 0 and large |p|; odd length so the
// vector remainder path runs too.
void make_slopes(double gamma0, std::vector<double>& px, std::vector<double>& py) {
  const std::size_t n = 4001;
  px.resize(n);
  py.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = gamma0 * std::pow(10.0, -8.0 + 16.0 * counter_uniform(1, i));
    const double t = 6.283185307179586 * counter_uniform(2, i);
    px[i] = r * std::cos(t);
    py[i] = r * std::sin(t);
  }
  px[7] = py[7] = 0.0;
  px[8] = 0.0;
  py[9] = 0.0;
}

void check_flux(const kernels::Table& t, const ModelCoefficients& c) {
  std::vector<double> px, py;
  make_slopes(c.gamma0, px, py);
  std::vector<double> zx(px.size()), zy(px.size());
  t.flux(px.data(), py.data(), zx.data(), zy.data(), px.size(), kernels::Coeffs::from(c));
  for (std::size_t i = 0; i < px.size(); ++i) {
    const auto z = zeta({px[i], py[i]}, c);
    const double s = std::hypot(z[0], z[1]);
    CHECK(std::abs(zx[i] - z[0]) <= 1e-14 * s);
    CHECK(std::abs(zy[i] - z[1]) <= 1e-14 * s);
  }
}

}  // namespace

TEST_CASE("scalar flux kernel matches zeta") {
  check_flux(kernels::scalar(), ModelCoefficients::nondimensional(1.0, 1.0, 1.0, 0.3));
  check_flux(kernels::scalar(), derive_coefficients(*physical_preset("baseline")));
}

TEST_CASE("scalar density kernel matches direct sums") {
  const auto c = ModelCoefficients::nondimensional(1.0, 2.0, 0.5, 1.0);
  std::vector<double> px, py;
  make_slopes(c.gamma0, px, py);
  long double rb = 0, r1 = 0, r3 = 0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    const long double r = std::hypot(px[i], py[i]);
    rb += r * (c.c1 * std::log1p(static_cast<double>(r) / c.gamma0));
    r1 += r;
    r3 += r * r * r;
  }
  const auto s = kernels::scalar().density(px.data(), py.data(), px.size(), kernels::Coeffs::from(c));
  CHECK(rel(s.r_bracket, static_cast<double>(rb)) < 1e-13);
  CHECK(rel(s.r, static_cast<double>(r1)) < 1e-13);
  CHECK(rel(s.r3, static_cast<double>(r3)) < 1e-13);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const kernels::Table* v = kernels::avx2();
  if (v == nullptr) {
    MESSAGE("avx2 not available on this machine");
    return;
  }
  CHECK(v->name != kernels::scalar().name);
  for (const auto& c : {ModelCoefficients::nondimensional(1.0, 1.0, 1.0, 0.3), derive_coefficients(*physical_preset("baseline"))}) {
    check_flux(*v, c);
    std::vector<double> px, py;
    make_slopes(c.gamma0, px, py);
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{5}, px.size()}) {
      const auto a = kernels::scalar().density(px.data(), py.data(), n, kernels::Coeffs::from(c));
      const auto b = v->density(px.data(), py.data(), n, kernels::Coeffs::from(c));
      CHECK(std::abs(a.r_bracket - b.r_bracket) <= 1e-13 * std::abs(a.r_bracket));
      CHECK(std::abs(a.r - b.r) <= 1e-14 * a.r);
      CHECK(std::abs(a.r3 - b.r3) <= 1e-14 * a.r3);
    }
  }
}

TEST_CASE("active table honours STEPFLOW_SIMD") {
  const char* env = std::getenv("STEPFLOW_SIMD");
  const auto& t = kernels::active();
  if (env != nullptr && std::string_view(env) == "scalar") {
    CHECK(t.name == kernels::scalar().name);
  } else if (kernels::avx2() != nullptr) {
    CHECK(t.name == kernels::avx2()->name);
  } else {
    CHECK(t.name == kernels::scalar().name);
  }
}
