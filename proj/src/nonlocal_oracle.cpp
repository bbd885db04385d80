#include "stepflow/nonlocal_oracle.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "stepflow/errors.hpp"

namespace stepflow {
namespace {

constexpr double kPi = std::numbers::pi;

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

struct Mode {
  double k1, k2;  // 2 pi k / L
  std::complex<double> c;
};

// Direct DFT; keeps every non-Nyquist mode (first derivatives drop Nyquist,
// as in the spectral path).
std::vector<Mode> direct_modes(const ScalarField& f) {
  const int n = f.grid().n;
  const double w = 2.0 * kPi / f.grid().L;
  std::vector<std::complex<double>> e(n);
  for (int j = 0; j < n; ++j) e[j] = std::polar(1.0, -2.0 * kPi * j / n);
  std::vector<Mode> modes;
  for (int k1 = -n / 2 + 1; k1 < n / 2; ++k1)
    for (int k2 = -n / 2 + 1; k2 < n / 2; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      std::complex<double> s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const int ph = ((k1 * i + k2 * j) % n + n) % n;
          s += f.at(i, j) * e[ph];
        }
      s /= double(n) * n;
      modes.push_back({w * k1, w * k2, s});
    }
  // Drop rounding-level coefficients; they only cost time.
  double cmax = 0.0;
  for (const auto& m : modes) cmax = std::max(cmax, std::abs(m.c));
  std::erase_if(modes, [cmax](const Mode& m) { return std::abs(m.c) <= 1e-14 * cmax; });
  return modes;
}

std::array<double, 2> grad_at(const std::vector<Mode>& modes, double y1, double y2) {
  double g1 = 0.0, g2 = 0.0;
  for (const auto& m : modes) {
    const std::complex<double> v = std::complex<double>(0.0, 1.0) * m.c * std::polar(1.0, m.k1 * y1 + m.k2 * y2);
    g1 += m.k1 * v.real();
    g2 += m.k2 * v.real();
  }
  return {g1, g2};
}

}  // namespace

double nonlocal_quadrature_oracle(const ScalarField& f, Vec2 x, int truncation_radius) {
  if (truncation_radius < 1) throw InvalidInput("truncation radius must be >= 1");
  const Grid& g = f.grid();
  const double L = g.L;
  const double rho = 0.25 * L;  // cutoff radius of chi
  auto chi = [rho](double s) { return 1.0 - smooth_step(s / rho); };
  const auto modes = direct_modes(f);

  // Near field: int_0^rho chi(s)/s int_0^pi e.(grad h(x - s e) - grad h(x + s e)) dtheta ds.
  const int n_theta = 64;
  auto radial = [&](double s) {
    double acc = 0.0;
    for (int t = 0; t < n_theta; ++t) {
      const double th = kPi * t / n_theta;
      const double e1 = std::cos(th), e2 = std::sin(th);
      const auto gm = grad_at(modes, x[0] - s * e1, x[1] - s * e2);
      const auto gp = grad_at(modes, x[0] + s * e1, x[1] + s * e2);
      acc += e1 * (gm[0] - gp[0]) + e2 * (gm[1] - gp[1]);
    }
    return chi(s) / s * acc * (kPi / n_theta);
  };
  double near = 0.0;
  const int panels = 4;
  for (int p = 0; p < panels; ++p) {
    const double a = rho * p / panels, b = rho * (p + 1) / panels;
    near += boost::math::quadrature::gauss<double, 20>::integrate(radial, a, b);
  }

  // Far field on the sample grid.
  const int n = g.n;
  const double dx = g.spacing();
  std::vector<std::array<double, 2>> grad(g.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) grad[static_cast<std::size_t>(i) * n + j] = grad_at(modes, i * dx, j * dx);
  const double rmax = (truncation_radius + 0.5) * L;
  const int R = truncation_radius + 1;
  double far = 0.0;
  for (int m1 = -R; m1 <= R; ++m1)
    for (int m2 = -R; m2 <= R; ++m2) {
      double cell = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double z1 = x[0] - (i * dx + m1 * L);
          const double z2 = x[1] - (j * dx + m2 * L);
          const double r = std::hypot(z1, z2);
          if (r > rmax || r < rho * 1e-12) continue;
          const double w = 1.0 - chi(r);
          if (w == 0.0) continue;
          const auto& gr = grad[static_cast<std::size_t>(i) * n + j];
          cell += w * (z1 * gr[0] + z2 * gr[1]) / (r * r * r);
        }
      far += cell;
    }
  far *= g.cell_area();
  return near + far;
}

}  // namespace stepflow
