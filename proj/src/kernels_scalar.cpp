#include <cmath>

#include "stepflow/kernels.hpp"

namespace stepflow::kernels {
namespace {

void flux(const double* px, const double* py, double* zx, double* zy, std::size_t n, const Coeffs& c) {
  const double small = 1e-4 * c.gamma0;
  const double f0 = 2.0 * c.c1 / c.gamma0;
  const double f1 = 3.0 * c.c3 - 1.5 * c.c1 / (c.gamma0 * c.gamma0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::sqrt(px[i] * px[i] + py[i] * py[i]);
    double f;
    if (r < small) {
      f = f0 + r * f1;
    } else {
      f = c.c1 * std::log1p(r / c.gamma0) / r + c.c1 / (r + c.gamma0) + 3.0 * c.c3 * r;
    }
    zx[i] = c.a * f * px[i];
    zy[i] = c.a * f * py[i];
  }
}

// Four interleaved accumulators, mirroring the AVX2 lane layout so both
// paths round alike.
DensitySums density(const double* px, const double* py, std::size_t n, const Coeffs& c) {
  double sb[4] = {}, sr[4] = {}, s3[4] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::sqrt(px[i] * px[i] + py[i] * py[i]);
    const std::size_t l = i & 3;
    sb[l] += r * (c.c1 * std::log1p(r / c.gamma0));
    sr[l] += r;
    s3[l] += r * r * r;
  }
  return {(sb[0] + sb[1]) + (sb[2] + sb[3]), (sr[0] + sr[1]) + (sr[2] + sr[3]), (s3[0] + s3[1]) + (s3[2] + s3[3])};
}

constexpr Table kScalar{"scalar", &flux, &density};

}  // namespace

const Table& scalar() { return kScalar; }

}  // namespace stepflow::kernels
