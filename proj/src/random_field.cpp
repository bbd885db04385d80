#include "stepflow/random_field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fft.hpp"
#include "stepflow/errors.hpp"

namespace stepflow {

std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_u64(seed, counter) >> 11) * 0x1.0p-53;
}

ScalarField random_smooth_field(Grid grid, Vec2 slope, double amplitude, int kmax, std::uint64_t seed) {
  const int n = grid.n;
  if (kmax < 1 || kmax >= n / 2) throw InvalidInput("kmax must lie in [1, n/2)");
  const int half = n / 2 + 1;
  std::vector<std::complex<double>> s(static_cast<std::size_t>(n) * half);
  auto slot = [&](int k1, int k2) -> std::complex<double>& {
    return s[static_cast<std::size_t>((k1 + n) % n) * half + k2];
  };
  std::uint64_t ctr = 0;
  // Walk the upper half plane in a fixed order so the draw sequence does not
  // depend on n.
  for (int k2 = 0; k2 <= kmax; ++k2)
    for (int k1 = -kmax; k1 <= kmax; ++k1) {
      if (k2 == 0 && k1 <= 0) continue;
      const double re = 2.0 * counter_uniform(seed, ctr++) - 1.0;
      const double im = 2.0 * counter_uniform(seed, ctr++) - 1.0;
      const std::complex<double> z = std::complex<double>(re, im) / (1.0 + double(k1) * k1 + double(k2) * k2);
      slot(k1, k2) = z;
      if (k2 == 0) slot(-k1, 0) = std::conj(z);
    }
  std::vector<double> v = fft::inverse(s, n);
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m > 0.0)
    for (auto& x : v) x *= amplitude / m;
  return ScalarField::from_unnormalized(grid, std::move(v), slope);
}

}  // namespace stepflow
