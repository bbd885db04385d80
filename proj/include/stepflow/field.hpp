#pragma once

// Periodic fields on the square cell [0, L]^2.
//
// Fourier convention: h(x) = sum_k h_k exp(2 pi i k.x / L), k in Z^2, with
// h_k = n^-2 sum_j h(x_j) exp(-2 pi i k.x_j / L). Samples are stored row-major,
// index i1 * n + i2 with x = (i1, i2) * L / n.
//
// Nonlocal kernel. For K(z) = z / |z|^3 the periodised kernel has Fourier
// coefficients d_k = -(2 pi i / L^2) k / |k|, so
//   (K * grad h)_k = L^2 d_k . (2 pi i k / L) h_k = (4 pi^2 |k| / L) h_k.
// Pairing with h gives int h (K * grad h) = 4 pi^2 L sum |k| |h_k|^2, i.e. the
// H^{1/2} seminorm identity. nonlocal_kernel_apply uses that multiplier; all
// quantities here are unsigned, signs live in energy.hpp.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace stepflow {

using Vec2 = std::array<double, 2>;

struct Grid {
  int n = 0;
  double L = 0.0;

  /// Throws InvalidInput unless n >= 8 is a power of two and L > 0.
  static Grid make(int n, double L);

  double spacing() const { return L / n; }
  std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
  double cell_area() const { return spacing() * spacing(); }
  Grid refined(int factor) const { return Grid{n * factor, L}; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Signed wavenumber of FFT index `idx` on an n-point axis: [-n/2, n/2).
constexpr int wavenumber(int idx, int n) { return idx < n / 2 ? idx : idx - n; }

/// h~ samples (zero mean) together with the mean slope B; the full height is
/// h(x) = h~(x) + B.x.
class ScalarField {
 public:
  ScalarField() = default;
  /// Throws InvalidInput on size mismatch, non-finite samples or
  /// |mean| > 1e-10 max|values|.
  ScalarField(Grid grid, std::vector<double> values, Vec2 slope = {0.0, 0.0});

  static ScalarField zero(Grid grid, Vec2 slope = {0.0, 0.0});

  /// Samples fn(x1, x2) and removes the sample mean.
  template <class Fn>
  static ScalarField sample(Grid grid, Vec2 slope, Fn&& fn) {
    std::vector<double> v(grid.size());
    const double dx = grid.spacing();
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j) v[static_cast<std::size_t>(i) * grid.n + j] = fn(i * dx, j * dx);
    return from_unnormalized(grid, std::move(v), slope);
  }

  /// Removes the mean of `values` instead of rejecting it.
  static ScalarField from_unnormalized(Grid grid, std::vector<double> values, Vec2 slope = {0.0, 0.0});

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  const Vec2& slope() const { return slope_; }
  double at(int i1, int i2) const { return values_[static_cast<std::size_t>(i1) * grid_.n + i2]; }

  double max_abs() const;
  double mean() const;

  ScalarField with_values(std::vector<double> values) const { return {grid_, std::move(values), slope_}; }
  ScalarField with_slope(Vec2 slope) const;
  /// Periodic shift by whole grid points: result(i) = this(i + s).
  ScalarField shifted(int s1, int s2) const;

 private:
  Grid grid_{};
  std::vector<double> values_;
  Vec2 slope_{0.0, 0.0};
};

/// Two periodic component arrays on a common grid.
struct VectorField {
  Grid grid{};
  std::vector<double> x1;
  std::vector<double> x2;

  static VectorField zero(Grid g) { return {g, std::vector<double>(g.size()), std::vector<double>(g.size())}; }
};

/// Half-spectrum (r2c layout) of a real field: index (i1, j2) with j2 in
/// [0, n/2]; the other half follows from h_{-k} = conj(h_k).
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(Grid grid, std::vector<std::complex<double>> coeffs);

  const Grid& grid() const { return grid_; }
  int half() const { return grid_.n / 2 + 1; }
  std::span<const std::complex<double>> data() const { return coeffs_; }
  std::span<std::complex<double>> data() { return coeffs_; }

  /// Coefficient for k in {-n/2 .. n/2-1}^2.
  std::complex<double> coeff(int k1, int k2) const;

 private:
  Grid grid_{};
  std::vector<std::complex<double>> coeffs_;
};

SpectralField forward(const ScalarField& f);
/// Inverse transform; the mean of the result is whatever coefficient 0 holds.
std::vector<double> inverse_values(const SpectralField& s);

/// grad h~ (without B). First-derivative multipliers vanish on Nyquist rows.
VectorField gradient(const ScalarField& f);
/// grad h = grad h~ + B.
VectorField full_gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
/// Solves Lap g = f for zero-mean g.
ScalarField inverse_laplacian(const ScalarField& f);

/// sum_{k != 0} |k| |h_k|^2.
double h_half_seminorm_sq(const ScalarField& f);
/// 2 pi^2 c1 L [h~]^2, i.e. (c1/2) int h (K * grad h). Unsigned.
double nonlocal_energy(const ScalarField& f, double c1);
/// K * grad h via the multiplier 4 pi^2 |k| / L. Unsigned, zero mean.
ScalarField nonlocal_kernel_apply(const ScalarField& f);

/// int f g dx (rectangle rule = periodic trapezoid).
double inner_product(const ScalarField& f, const ScalarField& g);
double l2_norm_sq(const ScalarField& f);
double l2_norm_sq(const VectorField& v);

/// Drops every mode with a Nyquist index.
ScalarField remove_nyquist(const ScalarField& f);

/// Band-limited interpolation of grad h (B included) onto the 2n grid.
VectorField padded_full_gradient(const ScalarField& f);
/// Truncates a 2n-grid vector field to the n-grid modes and returns its
/// spectral divergence on `coarse`. Adjoint of padded_full_gradient's linear part.
ScalarField truncated_divergence(const VectorField& padded, Grid coarse);

/// Gradient (curl-free) part grad Lap^-1 div v of a periodic vector field.
VectorField curl_free_part(const VectorField& v);

}  // namespace stepflow
