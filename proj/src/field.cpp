#include "stepflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fft.hpp"
#include "stepflow/errors.hpp"

namespace stepflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double sum(std::span<const double> v) {
  // Pairwise summation keeps translation invariance and mean checks at
  // rounding level for large grids.
  if (v.size() <= 64) return std::accumulate(v.begin(), v.end(), 0.0);
  const std::size_t h = v.size() / 2;
  return sum(v.first(h)) + sum(v.subspan(h));
}

// Applies mult(k1, k2) to every half-spectrum entry.
template <class Mult>
SpectralField apply_multiplier(const SpectralField& s, Mult&& mult) {
  const Grid& g = s.grid();
  const int half = s.half();
  std::vector<std::complex<double>> out(s.data().begin(), s.data().end());
  for (int i1 = 0; i1 < g.n; ++i1) {
    const int k1 = wavenumber(i1, g.n);
    for (int j2 = 0; j2 < half; ++j2) {
      auto& z = out[static_cast<std::size_t>(i1) * half + j2];
      z *= mult(k1, j2);
    }
  }
  return SpectralField(g, std::move(out));
}

// Weight of a half-spectrum column in sums over the full spectrum.
double column_weight(int j2, int n) { return (j2 == 0 || j2 == n / 2) ? 1.0 : 2.0; }

bool nyquist(int k1, int j2, int n) { return k1 == -n / 2 || j2 == n / 2; }

}  // namespace

Grid Grid::make(int n, double L) {
  if (n < 8 || !is_power_of_two(n)) throw InvalidInput("grid size must be a power of two >= 8");
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidInput("period L must be positive");
  return Grid{n, L};
}

ScalarField::ScalarField(Grid grid, std::vector<double> values, Vec2 slope)
    : grid_(grid), values_(std::move(values)), slope_(slope) {
  if (values_.size() != grid_.size()) throw InvalidInput("field size does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidInput("field values must be finite");
  const double m = mean();
  if (std::abs(m) > 1e-10 * max_abs()) {
    throw InvalidInput("field must have zero mean");
  }
}

ScalarField ScalarField::zero(Grid grid, Vec2 slope) {
  return ScalarField(grid, std::vector<double>(grid.size(), 0.0), slope);
}

ScalarField ScalarField::from_unnormalized(Grid grid, std::vector<double> values, Vec2 slope) {
  if (values.size() != grid.size()) throw InvalidInput("field size does not match grid");
  const double m = sum(values) / static_cast<double>(values.size());
  for (auto& v : values) v -= m;
  // A second pass removes the residual left by the first subtraction.
  const double r = sum(values) / static_cast<double>(values.size());
  for (auto& v : values) v -= r;
  return ScalarField(grid, std::move(values), slope);
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::mean() const { return values_.empty() ? 0.0 : sum(values_) / static_cast<double>(values_.size()); }

ScalarField ScalarField::with_slope(Vec2 slope) const {
  ScalarField f = *this;
  f.slope_ = slope;
  return f;
}

ScalarField ScalarField::shifted(int s1, int s2) const {
  const int n = grid_.n;
  std::vector<double> v(values_.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int si = ((i + s1) % n + n) % n;
      const int sj = ((j + s2) % n + n) % n;
      v[static_cast<std::size_t>(i) * n + j] = values_[static_cast<std::size_t>(si) * n + sj];
    }
  return ScalarField(grid_, std::move(v), slope_);
}

SpectralField::SpectralField(Grid grid, std::vector<std::complex<double>> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != static_cast<std::size_t>(grid_.n) * half()) {
    throw InvalidInput("spectral size does not match grid");
  }
}

std::complex<double> SpectralField::coeff(int k1, int k2) const {
  const int n = grid_.n;
  auto idx = [n](int k) { return ((k % n) + n) % n; };
  if (k2 >= 0 && k2 <= n / 2) return coeffs_[static_cast<std::size_t>(idx(k1)) * half() + k2];
  return std::conj(coeffs_[static_cast<std::size_t>(idx(-k1)) * half() + (-k2)]);
}

SpectralField forward(const ScalarField& f) {
  return SpectralField(f.grid(), fft::forward(f.values(), f.grid().n));
}

std::vector<double> inverse_values(const SpectralField& s) { return fft::inverse(s.data(), s.grid().n); }

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  const SpectralField s = forward(f);
  const double w = kTwoPi / g.L;
  const int n = g.n;
  auto d1 = apply_multiplier(s, [&](int k1, int j2) {
    return nyquist(k1, j2, n) ? std::complex<double>{} : std::complex<double>(0.0, w * k1);
  });
  auto d2 = apply_multiplier(s, [&](int k1, int j2) {
    return nyquist(k1, j2, n) ? std::complex<double>{} : std::complex<double>(0.0, w * j2);
  });
  return VectorField{g, inverse_values(d1), inverse_values(d2)};
}

VectorField full_gradient(const ScalarField& f) {
  VectorField v = gradient(f);
  for (auto& x : v.x1) x += f.slope()[0];
  for (auto& x : v.x2) x += f.slope()[1];
  return v;
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = v.grid;
  const int n = g.n;
  const double w = kTwoPi / g.L;
  const SpectralField s1(g, fft::forward(v.x1, n));
  const SpectralField s2(g, fft::forward(v.x2, n));
  std::vector<std::complex<double>> out(s1.data().size());
  const int half = s1.half();
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = wavenumber(i1, n);
    for (int j2 = 0; j2 < half; ++j2) {
      const std::size_t q = static_cast<std::size_t>(i1) * half + j2;
      if (nyquist(k1, j2, n)) continue;
      out[q] = std::complex<double>(0.0, w * k1) * s1.data()[q] + std::complex<double>(0.0, w * j2) * s2.data()[q];
    }
  }
  return ScalarField::from_unnormalized(g, inverse_values(SpectralField(g, std::move(out))));
}

ScalarField laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  const double w = kTwoPi / g.L;
  auto s = apply_multiplier(forward(f), [&](int k1, int j2) {
    return std::complex<double>(-w * w * (double(k1) * k1 + double(j2) * j2), 0.0);
  });
  return ScalarField::from_unnormalized(g, inverse_values(s), f.slope());
}

ScalarField inverse_laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  const double w = kTwoPi / g.L;
  auto s = apply_multiplier(forward(f), [&](int k1, int j2) {
    const double k2sq = double(k1) * k1 + double(j2) * j2;
    return k2sq == 0.0 ? std::complex<double>{} : std::complex<double>(-1.0 / (w * w * k2sq), 0.0);
  });
  return ScalarField::from_unnormalized(g, inverse_values(s), f.slope());
}

double h_half_seminorm_sq(const ScalarField& f) {
  const SpectralField s = forward(f);
  const int n = f.grid().n;
  const int half = s.half();
  double acc = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = wavenumber(i1, n);
    for (int j2 = 0; j2 < half; ++j2) {
      const double kk = std::sqrt(double(k1) * k1 + double(j2) * j2);
      acc += column_weight(j2, n) * kk * std::norm(s.data()[static_cast<std::size_t>(i1) * half + j2]);
    }
  }
  return acc;
}

double nonlocal_energy(const ScalarField& f, double c1) {
  return 2.0 * std::numbers::pi * std::numbers::pi * c1 * f.grid().L * h_half_seminorm_sq(f);
}

ScalarField nonlocal_kernel_apply(const ScalarField& f) {
  const Grid& g = f.grid();
  const double m = 4.0 * std::numbers::pi * std::numbers::pi / g.L;
  auto s = apply_multiplier(forward(f), [&](int k1, int j2) {
    return std::complex<double>(m * std::sqrt(double(k1) * k1 + double(j2) * j2), 0.0);
  });
  return ScalarField::from_unnormalized(g, inverse_values(s));
}

double inner_product(const ScalarField& f, const ScalarField& g) {
  if (!(f.grid() == g.grid())) throw InvalidInput("inner product of fields on different grids");
  std::vector<double> prod(f.values().size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f.values()[i] * g.values()[i];
  return sum(prod) * f.grid().cell_area();
}

double l2_norm_sq(const ScalarField& f) { return inner_product(f, f); }

double l2_norm_sq(const VectorField& v) {
  std::vector<double> sq(v.x1.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = v.x1[i] * v.x1[i] + v.x2[i] * v.x2[i];
  return sum(sq) * v.grid.cell_area();
}

ScalarField remove_nyquist(const ScalarField& f) {
  const int n = f.grid().n;
  auto s = apply_multiplier(forward(f), [&](int k1, int j2) { return nyquist(k1, j2, n) ? 0.0 : 1.0; });
  return ScalarField::from_unnormalized(f.grid(), inverse_values(s), f.slope());
}

VectorField padded_full_gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  const int n = g.n;
  const int N = 2 * n;
  const Grid fine{N, g.L};
  const double w = kTwoPi / g.L;
  const SpectralField s = forward(f);
  const int half = s.half();
  const int fhalf = N / 2 + 1;
  std::vector<std::complex<double>> p1(static_cast<std::size_t>(N) * fhalf);
  std::vector<std::complex<double>> p2(p1.size());
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = wavenumber(i1, n);
    const int fi = k1 >= 0 ? k1 : k1 + N;
    for (int j2 = 0; j2 < half; ++j2) {
      if (nyquist(k1, j2, n)) continue;
      const auto z = s.data()[static_cast<std::size_t>(i1) * half + j2];
      const std::size_t q = static_cast<std::size_t>(fi) * fhalf + j2;
      p1[q] = std::complex<double>(0.0, w * k1) * z;
      p2[q] = std::complex<double>(0.0, w * j2) * z;
    }
  }
  VectorField out{fine, fft::inverse(p1, N), fft::inverse(p2, N)};
  for (auto& x : out.x1) x += f.slope()[0];
  for (auto& x : out.x2) x += f.slope()[1];
  return out;
}

ScalarField truncated_divergence(const VectorField& padded, Grid coarse) {
  const int n = coarse.n;
  const int N = padded.grid.n;
  if (N != 2 * n) throw InvalidInput("padded field must live on the 2n grid");
  const double w = kTwoPi / coarse.L;
  const auto s1 = fft::forward(padded.x1, N);
  const auto s2 = fft::forward(padded.x2, N);
  const int half = n / 2 + 1;
  const int fhalf = N / 2 + 1;
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n) * half);
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = wavenumber(i1, n);
    const int fi = k1 >= 0 ? k1 : k1 + N;
    for (int j2 = 0; j2 < half; ++j2) {
      if (nyquist(k1, j2, n)) continue;
      const std::size_t q = static_cast<std::size_t>(fi) * fhalf + j2;
      out[static_cast<std::size_t>(i1) * half + j2] =
          std::complex<double>(0.0, w * k1) * s1[q] + std::complex<double>(0.0, w * j2) * s2[q];
    }
  }
  return ScalarField::from_unnormalized(coarse, inverse_values(SpectralField(coarse, std::move(out))));
}

VectorField curl_free_part(const VectorField& v) {
  return gradient(inverse_laplacian(divergence(v)));
}

}  // namespace stepflow
