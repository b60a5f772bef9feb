// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "ris/simd/kernels.hpp"

namespace ris::simd::avx2 {

namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

}  // namespace

std::complex<double> rotated_sum(const double* re, const double* im, const std::uint32_t* idx,
                                 const double* cos_table, const double* sin_table, std::size_t n) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    const __m256d c = _mm256_i32gather_pd(cos_table, vi, 8);
    const __m256d s = _mm256_i32gather_pd(sin_table, vi, 8);
    const __m256d r = _mm256_loadu_pd(re + i);
    const __m256d m = _mm256_loadu_pd(im + i);
    acc_re = _mm256_fmadd_pd(r, c, acc_re);
    acc_re = _mm256_fnmadd_pd(m, s, acc_re);
    acc_im = _mm256_fmadd_pd(r, s, acc_im);
    acc_im = _mm256_fmadd_pd(m, c, acc_im);
  }
  double out_re = horizontal_sum(acc_re);
  double out_im = horizontal_sum(acc_im);
  for (; i < n; ++i) {
    const double c = cos_table[idx[i]];
    const double s = sin_table[idx[i]];
    out_re += re[i] * c - im[i] * s;
    out_im += re[i] * s + im[i] * c;
  }
  return {out_re, out_im};
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double out = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double abs_sum(const double* re, const double* im, std::size_t n) {
  // sqrt(re^2 + im^2); inputs are channel coefficients, far from overflow.
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(re + i);
    const __m256d m = _mm256_loadu_pd(im + i);
    const __m256d sq = _mm256_fmadd_pd(r, r, _mm256_mul_pd(m, m));
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
  }
  double out = horizontal_sum(acc);
  for (; i < n; ++i) out += std::hypot(re[i], im[i]);
  return out;
}

}  // namespace ris::simd::avx2
