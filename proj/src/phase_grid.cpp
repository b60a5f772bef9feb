#include "ris/phase_grid.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "ris/error.hpp"
#include "ris/scenario.hpp"

namespace ris {

PhaseGrid::PhaseGrid(unsigned bits) : bits_(bits) {
  if (bits < 1 || bits > kMaxBits) {
    throw ConfigError("phase grid needs 1 <= q <= " + std::to_string(kMaxBits) + ", got " +
                      std::to_string(bits));
  }
  size_ = std::uint32_t{1} << bits;
  values_.resize(size_);
  cos_.resize(size_);
  sin_.resize(size_);
  for (PhaseIndex i = 0; i < size_; ++i) {
    const std::int64_t s = step_of(i);
    values_[i] = kTwoPi * static_cast<double>(s) / static_cast<double>(size_);
    // Exact values on the axes (multiples of pi/2).
    const std::int64_t quarter = static_cast<std::int64_t>(size_) / 4;
    if (quarter > 0 && s % quarter == 0) {
      static constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
      static constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
      const auto k = static_cast<std::size_t>(((s / quarter) % 4 + 4) % 4);
      cos_[i] = kCos[k];
      sin_[i] = kSin[k];
    } else if (size_ == 2) {
      cos_[i] = s == 0 ? 1.0 : -1.0;
      sin_[i] = 0.0;
    } else {
      cos_[i] = std::cos(values_[i]);
      sin_[i] = std::sin(values_[i]);
    }
  }
}

const PhaseGrid& PhaseGrid::of(unsigned bits) {
  if (bits < 1 || bits > kMaxBits) {
    throw ConfigError("phase grid needs 1 <= q <= " + std::to_string(kMaxBits) + ", got " +
                      std::to_string(bits));
  }
  static std::array<std::once_flag, kMaxBits + 1> once;
  static std::array<std::unique_ptr<PhaseGrid>, kMaxBits + 1> grids;
  std::call_once(once[bits], [bits] { grids[bits] = std::make_unique<PhaseGrid>(bits); });
  return *grids[bits];
}

std::int64_t PhaseGrid::step_of(PhaseIndex index) const {
  return static_cast<std::int64_t>(index) + 1 - static_cast<std::int64_t>(size_ / 2);
}

PhaseIndex PhaseGrid::index_of_step(std::int64_t step) const {
  const auto n = static_cast<std::int64_t>(size_);
  // step s -> index s - 1 + n/2 (mod n)
  std::int64_t i = (step - 1 + n / 2) % n;
  if (i < 0) i += n;
  return static_cast<PhaseIndex>(i);
}

PhaseIndex PhaseGrid::add(PhaseIndex a, PhaseIndex b) const {
  return index_of_step(step_of(a) + step_of(b));
}

PhaseIndex PhaseGrid::shift(PhaseIndex a, std::int64_t steps) const {
  return index_of_step(step_of(a) + steps);
}

PhaseIndex PhaseGrid::nearest(double radians) const {
  const double x = wrap_angle(radians) * static_cast<double>(size_) / kTwoPi;  // in steps
  const double lo = std::floor(x);
  const double frac = x - lo;
  const auto lo_step = static_cast<std::int64_t>(lo);
  const PhaseIndex below = index_of_step(lo_step);
  const PhaseIndex above = index_of_step(lo_step + 1);
  if (frac < 0.5) return below;
  if (frac > 0.5) return above;
  return below < above ? below : above;
}

double PhaseGrid::distance(double radians, PhaseIndex index) const {
  return std::abs(wrap_angle(radians - values_[index]));
}

}  // namespace ris
