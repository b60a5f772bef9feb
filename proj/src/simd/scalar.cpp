#include <cmath>

#include "ris/simd/kernels.hpp"

namespace ris::simd::scalar {

std::complex<double> rotated_sum(const double* re, const double* im, const std::uint32_t* idx,
                                 const double* cos_table, const double* sin_table, std::size_t n) {
  double acc_re = 0.0;
  double acc_im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cos_table[idx[i]];
    const double s = sin_table[idx[i]];
    acc_re += re[i] * c - im[i] * s;
    acc_im += re[i] * s + im[i] * c;
  }
  return {acc_re, acc_im};
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double abs_sum(const double* re, const double* im, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::hypot(re[i], im[i]);
  return acc;
}

}  // namespace ris::simd::scalar
