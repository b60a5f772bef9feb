#include <atomic>
#include <cstdlib>
#include <string>

#include "ris/error.hpp"
#include "ris/simd/kernels.hpp"

namespace ris::simd {

namespace {

constexpr KernelTable kScalarTable{&scalar::rotated_sum, &scalar::dot, &scalar::axpy,
                                   &scalar::abs_sum};
#if defined(RIS_HAVE_AVX2)
constexpr KernelTable kAvx2Table{&avx2::rotated_sum, &avx2::dot, &avx2::axpy, &avx2::abs_sum};
#endif

bool cpu_has_avx2() {
#if defined(RIS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Level initial_level() {
  Level level = detected_level();
  if (const char* env = std::getenv("RIS_SIMD")) {
    const Level requested = parse_level(env);
    if (requested == Level::kScalar) level = Level::kScalar;
  }
  return level;
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{&kernels_for(initial_level())};
  return table;
}

}  // namespace

std::string_view level_name(Level level) {
  return level == Level::kAvx2 ? "avx2" : "scalar";
}

Level detected_level() {
  static const Level level = cpu_has_avx2() ? Level::kAvx2 : Level::kScalar;
  return level;
}

const KernelTable& kernels_for(Level level) {
#if defined(RIS_HAVE_AVX2)
  if (level == Level::kAvx2 && detected_level() == Level::kAvx2) return kAvx2Table;
#else
  (void)level;
#endif
  return kScalarTable;
}

Level active_level() {
  return active_table().load() == &kScalarTable ? Level::kScalar : Level::kAvx2;
}

Level set_level(Level level) {
  active_table().store(&kernels_for(level));
  return active_level();
}

Level parse_level(std::string_view name) {
  if (name == "scalar") return Level::kScalar;
  if (name == "avx2") return Level::kAvx2;
  if (name == "auto") return detected_level();
  throw ConfigError("unknown SIMD level '" + std::string(name) + "' (expected scalar, avx2, auto)");
}

std::complex<double> rotated_sum(const double* re, const double* im, const std::uint32_t* idx,
                                 const double* cos_table, const double* sin_table, std::size_t n) {
  return active_table().load(std::memory_order_relaxed)->rotated_sum(re, im, idx, cos_table,
                                                                     sin_table, n);
}

double dot(const double* a, const double* b, std::size_t n) {
  return active_table().load(std::memory_order_relaxed)->dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active_table().load(std::memory_order_relaxed)->axpy(alpha, x, y, n);
}

double abs_sum(const double* re, const double* im, std::size_t n) {
  return active_table().load(std::memory_order_relaxed)->abs_sum(re, im, n);
}

}  // namespace ris::simd
