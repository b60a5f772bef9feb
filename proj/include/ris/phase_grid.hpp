#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ris {

/// Position on the q-bit phase grid, 0-based: index i stands for the grid
/// value theta_{i+1} = -pi + 2 pi (i + 1) / 2^q. Files store i + 1.
using PhaseIndex = std::uint32_t;

/// The 2^q phases realizable by a q-bit phase shifter, uniform on (-pi, pi].
///
/// The grid is the set of multiples of 2 pi / 2^q, so it is closed under
/// addition modulo 2 pi; add() performs that addition exactly on indices.
class PhaseGrid {
 public:
  static constexpr unsigned kMaxBits = 16;

  explicit PhaseGrid(unsigned bits);

  /// Shared immutable grid for q bits; lives for the whole program.
  static const PhaseGrid& of(unsigned bits);

  unsigned bits() const { return bits_; }
  std::uint32_t size() const { return size_; }

  /// Grid value of an index, in (-pi, pi].
  double value(PhaseIndex index) const { return values_[index]; }
  std::span<const double> values() const { return values_; }
  std::span<const double> cos_table() const { return cos_; }
  std::span<const double> sin_table() const { return sin_; }

  /// Index of phase zero.
  PhaseIndex zero() const { return size_ / 2 - 1; }

  /// Signed multiple s of 2 pi / 2^q, s in (-2^(q-1), 2^(q-1)].
  std::int64_t step_of(PhaseIndex index) const;
  PhaseIndex index_of_step(std::int64_t step) const;

  /// Exact modular sum of two grid phases.
  PhaseIndex add(PhaseIndex a, PhaseIndex b) const;
  /// Moves `steps` grid positions (positive = counter-clockwise), wrapping.
  PhaseIndex shift(PhaseIndex a, std::int64_t steps) const;

  /// Nearest grid value to an arbitrary angle (circular distance); ties go to
  /// the smaller index.
  PhaseIndex nearest(double radians) const;

  /// Circular distance between an angle and a grid value, in [0, pi].
  double distance(double radians, PhaseIndex index) const;

  bool valid(PhaseIndex index) const { return index < size_; }

  bool operator==(const PhaseGrid& other) const { return bits_ == other.bits_; }

 private:
  unsigned bits_;
  std::uint32_t size_;
  std::vector<double> values_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

}  // namespace ris
