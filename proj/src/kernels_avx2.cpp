// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "stepflow/kernels.hpp"

namespace stepflow::kernels {
namespace {

// log(x) for finite x >= DBL_MIN. x = 2^e m with m in [sqrt(1/2), sqrt(2));
// log m = 2 atanh(s), s = (m - 1)/(m + 1), |s| < 0.1716, series to s^23.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // Biased exponent -> double via the 2^52 trick.
  const __m256i eb = _mm256_srli_epi64(bits, 52);
  const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(eb, _mm256_castpd_si256(two52))), two52);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d z = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(1.0 / 23.0);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 21.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 19.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 17.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 3.0));
  // 2s + 2s z p, keeping the leading 2s exact.
  const __m256d two_s = _mm256_add_pd(s, s);
  const __m256d logm = _mm256_fmadd_pd(_mm256_mul_pd(two_s, z), p, two_s);

  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  return _mm256_add_pd(_mm256_mul_pd(e, ln2_hi), _mm256_fmadd_pd(e, ln2_lo, logm));
}

// log1p(x) for x >= 0: log(u) corrected by the rounding error of u = 1 + x.
inline __m256d log1p_pd(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d u = _mm256_add_pd(one, x);
  const __m256d err = _mm256_sub_pd(_mm256_sub_pd(u, one), x);
  return _mm256_sub_pd(log_pd(u), _mm256_div_pd(err, u));
}

inline __m256d radius(__m256d x, __m256d y) { return _mm256_sqrt_pd(_mm256_fmadd_pd(x, x, _mm256_mul_pd(y, y))); }

void flux(const double* px, const double* py, double* zx, double* zy, std::size_t n, const Coeffs& c) {
  const __m256d a = _mm256_set1_pd(c.a);
  const __m256d c1 = _mm256_set1_pd(c.c1);
  const __m256d c3x3 = _mm256_set1_pd(3.0 * c.c3);
  const __m256d g0 = _mm256_set1_pd(c.gamma0);
  const __m256d inv_g0 = _mm256_set1_pd(1.0 / c.gamma0);
  const __m256d small = _mm256_set1_pd(1e-4 * c.gamma0);
  const __m256d f0 = _mm256_set1_pd(2.0 * c.c1 / c.gamma0);
  const __m256d f1 = _mm256_set1_pd(3.0 * c.c3 - 1.5 * c.c1 / (c.gamma0 * c.gamma0));
  const __m256d tiny = _mm256_set1_pd(1e-300);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(px + i);
    const __m256d y = _mm256_loadu_pd(py + i);
    const __m256d r = radius(x, y);
    const __m256d rs = _mm256_max_pd(r, tiny);
    __m256d f = _mm256_div_pd(_mm256_mul_pd(c1, log1p_pd(_mm256_mul_pd(r, inv_g0))), rs);
    f = _mm256_add_pd(f, _mm256_div_pd(c1, _mm256_add_pd(r, g0)));
    f = _mm256_fmadd_pd(c3x3, r, f);
    const __m256d taylor = _mm256_fmadd_pd(r, f1, f0);
    f = _mm256_blendv_pd(f, taylor, _mm256_cmp_pd(r, small, _CMP_LT_OQ));
    const __m256d af = _mm256_mul_pd(a, f);
    _mm256_storeu_pd(zx + i, _mm256_mul_pd(af, x));
    _mm256_storeu_pd(zy + i, _mm256_mul_pd(af, y));
  }
  if (i < n) scalar().flux(px + i, py + i, zx + i, zy + i, n - i, c);
}

DensitySums density(const double* px, const double* py, std::size_t n, const Coeffs& c) {
  const __m256d c1 = _mm256_set1_pd(c.c1);
  const __m256d inv_g0 = _mm256_set1_pd(1.0 / c.gamma0);
  __m256d sb = _mm256_setzero_pd(), sr = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = radius(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i));
    sb = _mm256_fmadd_pd(r, _mm256_mul_pd(c1, log1p_pd(_mm256_mul_pd(r, inv_g0))), sb);
    sr = _mm256_add_pd(sr, r);
    s3 = _mm256_fmadd_pd(_mm256_mul_pd(r, r), r, s3);
  }
  alignas(32) double b[4], q[4], t[4];
  _mm256_store_pd(b, sb);
  _mm256_store_pd(q, sr);
  _mm256_store_pd(t, s3);
  for (; i < n; ++i) {
    const double r = std::sqrt(px[i] * px[i] + py[i] * py[i]);
    const std::size_t l = i & 3;
    b[l] += r * (c.c1 * std::log1p(r / c.gamma0));
    q[l] += r;
    t[l] += r * r * r;
  }
  return {(b[0] + b[1]) + (b[2] + b[3]), (q[0] + q[1]) + (q[2] + q[3]), (t[0] + t[1]) + (t[2] + t[3])};
}

}  // namespace

extern const Table kAvx2Table;
const Table kAvx2Table{"avx2", &flux, &density};

}  // namespace stepflow::kernels
