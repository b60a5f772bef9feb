#pragma once

// Data-parallel inner loops used by gain evaluation and the dense layers.
//
// Each kernel exists as a scalar reference (namespace scalar) and, on x86-64
// builds, an AVX2/FMA variant (namespace avx2). The free functions in
// ris::simd dispatch to the best variant the running CPU supports. Variants
// agree to rounding; they are not bit-identical because the AVX2 reductions
// sum in a different order.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace ris::simd {

enum class Level { kScalar, kAvx2 };

std::string_view level_name(Level level);

/// Best level supported by both the build and the running CPU.
Level detected_level();

/// Level currently used by the dispatching functions.
Level active_level();

/// Overrides the dispatch level. Requesting an unsupported level falls back
/// to scalar. Returns the level actually selected.
Level set_level(Level level);

/// Parses "scalar" / "avx2" / "auto".
Level parse_level(std::string_view name);

// Sum_i (re[i] + j im[i]) * (cos_table[idx[i]] + j sin_table[idx[i]]).
using RotatedSumFn = std::complex<double> (*)(const double* re, const double* im,
                                              const std::uint32_t* idx, const double* cos_table,
                                              const double* sin_table, std::size_t n);
// Sum_i a[i] * b[i].
using DotFn = double (*)(const double* a, const double* b, std::size_t n);
// y[i] += alpha * x[i].
using AxpyFn = void (*)(double alpha, const double* x, double* y, std::size_t n);
// Sum_i |re[i] + j im[i]|, i.e. the equal-gain-combining amplitude sum.
using AbsSumFn = double (*)(const double* re, const double* im, std::size_t n);

struct KernelTable {
  RotatedSumFn rotated_sum;
  DotFn dot;
  AxpyFn axpy;
  AbsSumFn abs_sum;
};

/// Kernel table for a specific level (scalar if the level is unavailable).
const KernelTable& kernels_for(Level level);

namespace scalar {
std::complex<double> rotated_sum(const double* re, const double* im, const std::uint32_t* idx,
                                 const double* cos_table, const double* sin_table, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double abs_sum(const double* re, const double* im, std::size_t n);
}  // namespace scalar

#if defined(RIS_HAVE_AVX2)
namespace avx2 {
std::complex<double> rotated_sum(const double* re, const double* im, const std::uint32_t* idx,
                                 const double* cos_table, const double* sin_table, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double abs_sum(const double* re, const double* im, std::size_t n);
}  // namespace avx2
#endif

// Dispatching entry points.
std::complex<double> rotated_sum(const double* re, const double* im, const std::uint32_t* idx,
                                 const double* cos_table, const double* sin_table, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double abs_sum(const double* re, const double* im, std::size_t n);

}  // namespace ris::simd
