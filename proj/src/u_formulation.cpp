#include "stepflow/u_formulation.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"

namespace stepflow {
namespace {

using Array = std::vector<double>;

// Row-major n x n, index i1 * n + i2. Lines along x1 are columns.
Array transpose(const Array& a, int n) {
  Array t(a.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j) * n + i] = a[static_cast<std::size_t>(i) * n + j];
  return t;
}

// Means along x1 (a function of x2) and along x2 (a function of x1).
Array line_means_x1(const Array& a, int n) {
  Array m(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[j] += a[static_cast<std::size_t>(i) * n + j];
  for (auto& x : m) x /= n;
  return m;
}

Array line_means_x2(const Array& a, int n) {
  Array m(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i] += a[static_cast<std::size_t>(i) * n + j];
  for (auto& x : m) x /= n;
  return m;
}

// G(x1, x2) = int_0^x1 g(s, x2) ds for g with zero mean along every x1 line.
Array cumulative_x1(const Array& g, const Grid& grid, CumulativeRule rule) {
  const int n = grid.n;
  const double dx = grid.spacing();
  Array G(g.size(), 0.0);
  if (rule == CumulativeRule::Trapezoid) {
    for (int j = 0; j < n; ++j)
      for (int i = 1; i < n; ++i) {
        const std::size_t q = static_cast<std::size_t>(i) * n + j;
        const std::size_t p = static_cast<std::size_t>(i - 1) * n + j;
        G[q] = G[p] + 0.5 * dx * (g[p] + g[q]);
      }
    return G;
  }
  auto s = fft::forward(g, n);
  const int half = n / 2 + 1;
  const double w = 2.0 * std::numbers::pi / grid.L;
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = wavenumber(i1, n);
    for (int j2 = 0; j2 < half; ++j2) {
      auto& z = s[static_cast<std::size_t>(i1) * half + j2];
      if (k1 == 0 || k1 == -n / 2) {
        z = 0.0;
      } else {
        z /= std::complex<double>(0.0, w * k1);
      }
    }
  }
  G = fft::inverse(s, n);
  // Anchor every line at x1 = 0.
  for (int i = n - 1; i >= 0; --i)
    for (int j = 0; j < n; ++j) G[static_cast<std::size_t>(i) * n + j] -= G[j];
  return G;
}

// 1-D cumulative integral of a zero-mean periodic sequence.
Array cumulative_1d(const Array& m, const Grid& grid, CumulativeRule rule) {
  const int n = grid.n;
  // Reuse the 2-D routine on an array constant in x2.
  Array a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = m[i];
  const Array G = cumulative_x1(a, grid, rule);
  Array out(n);
  for (int i = 0; i < n; ++i) out[i] = G[static_cast<std::size_t>(i) * n];
  return out;
}

void remove_mean(Array& a) {
  double s = 0.0;
  for (double x : a) s += x;
  s /= static_cast<double>(a.size());
  for (auto& x : a) x -= s;
}

// First component of the construction, for h given row-major.
Array first_component(const Array& h, const Grid& grid, CumulativeRule rule) {
  const int n = grid.n;
  const Array m1 = line_means_x1(h, n);  // m1(x2)
  const Array m2 = line_means_x2(h, n);  // m2(x1)
  Array g(h.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(i) * n + j] = h[static_cast<std::size_t>(i) * n + j] - m1[j];
  const Array G = cumulative_x1(g, grid, rule);
  const Array M = cumulative_1d(m2, grid, rule);
  Array u(h.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t q = static_cast<std::size_t>(i) * n + j;
      u[q] = 0.5 * G[q] + 0.5 * M[i];
    }
  remove_mean(u);
  return u;
}

}  // namespace

VectorField build_u_from_h(const ScalarField& f, CumulativeRule rule) {
  const Grid& g = f.grid();
  const Array h(f.values().begin(), f.values().end());
  Array u1 = first_component(h, g, rule);
  // The second component is the first one with the axes swapped.
  Array u2 = transpose(first_component(transpose(h, g.n), g, rule), g.n);
  return VectorField{g, std::move(u1), std::move(u2)};
}

ScalarField h_from_u(const VectorField& u, Vec2 B) { return divergence(u).with_slope(B); }

EnergyBreakdown total_energy_u(const VectorField& u, Vec2 B, const ModelCoefficients& c) {
  return total_energy(h_from_u(u, B), c);
}

}  // namespace stepflow
