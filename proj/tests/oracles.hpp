#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerical code; everything is written out from the
// definitions with std::complex.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
constexpr double pi = 3.14159265358979323846;

// Grid value for the 1-based grid position k of a q-bit shifter.
inline double grid_value(unsigned q, std::uint64_t k) {
  return -pi + 2.0 * pi * static_cast<double>(k) / static_cast<double>(std::uint64_t{1} << q);
}

inline double wrap(double a) {
  double r = std::fmod(a + pi, 2.0 * pi);
  if (r <= 0.0) r += 2.0 * pi;
  return r - pi;
}

// |sum c_m e^{j theta_m}|^2 / M
inline double gain(const std::vector<C>& c, const std::vector<double>& theta) {
  C s = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) s += c[m] * std::polar(1.0, theta[m]);
  return std::norm(s) / static_cast<double>(c.size());
}

inline double egc(const std::vector<C>& c) {
  double s = 0.0;
  for (const C& x : c) s += std::abs(x);
  return s * s / static_cast<double>(c.size());
}

inline std::vector<C> random_channel(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<C> c(m);
  for (auto& x : c) x = C(n(rng), n(rng));
  return c;
}

// Brute-force best mean gain over all (2^q)^M grid vectors.
inline double brute_force_best(const std::vector<std::vector<C>>& users, unsigned q) {
  const std::size_t M = users.front().size();
  const std::uint64_t K = std::uint64_t{1} << q;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < M; ++i) total *= K;
  double best = -1.0;
  std::vector<double> theta(M);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t x = code;
    for (std::size_t m = 0; m < M; ++m) {
      theta[m] = grid_value(q, x % K + 1);
      x /= K;
    }
    double g = 0.0;
    for (const auto& u : users) g += gain(u, theta);
    best = std::max(best, g / static_cast<double>(users.size()));
  }
  return best;
}

}  // namespace oracle
