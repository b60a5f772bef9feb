#pragma once

// Multi-level sub-array decomposition.
//
// A LevelSpec (P_1, ..., P_v) with M = P_1 * ... * P_v groups the elements
// contiguously in mixed radix: level 1 holds one phase per element, level l
// holds one combining phase per block of P_1 * ... * P_{l-1} elements, and the
// top level holds P_v phases. The phase of element m is the grid sum of its
// components at every level, computed with exact index arithmetic.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ris/codebook.hpp"
#include "ris/phase_grid.hpp"
#include "ris/scenario.hpp"

namespace ris {

class LevelSpec {
 public:
  /// sizes = (P_1, ..., P_v); v >= 1, every P >= 1.
  explicit LevelSpec(std::vector<std::size_t> sizes);

  /// Parses "32,8" style lists.
  static LevelSpec parse(const std::string& text);

  std::size_t levels() const { return sizes_.size(); }
  /// P_{l+1} for 0-based level l.
  std::size_t size(std::size_t level) const { return sizes_.at(level); }
  std::span<const std::size_t> sizes() const { return sizes_; }
  std::size_t elements() const { return elements_; }

  /// Elements covered by one entry of level l: P_1 * ... * P_l (0-based l).
  std::size_t stride(std::size_t level) const { return strides_.at(level); }
  /// Number of phases at level l: M / stride(l).
  std::size_t entries(std::size_t level) const { return elements_ / strides_.at(level); }
  /// Number of independent groups at level l, each of size(l) phases.
  std::size_t groups(std::size_t level) const { return entries(level) / sizes_.at(level); }

  /// Throws ConfigError unless the product equals m.
  void require_elements(std::size_t m) const;

  std::string to_string() const;
  bool operator==(const LevelSpec&) const = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t elements_ = 1;
};

/// Element index m (1-based) to per-level indices (p_1, ..., p_v), each
/// 1-based, by p_l = mod(ceil(m / (P_1...P_{l-1})), P_l) with 0 read as P_l.
std::vector<std::size_t> index_to_multilevel(std::size_t m, const LevelSpec& spec);

/// Inverse: m = 1 + sum_l (p_l - 1) * P_1...P_{l-1}. `digits` ordered p_1 first.
std::size_t multilevel_to_index(std::span<const std::size_t> digits, const LevelSpec& spec);

/// Per-level grid indices; levels[l].size() == spec.entries(l).
struct LevelPhases {
  std::vector<std::vector<PhaseIndex>> levels;

  static LevelPhases zeros(const LevelSpec& spec, const PhaseGrid& grid);
  void validate(const LevelSpec& spec, const PhaseGrid& grid) const;
};

/// Element phases as the exact grid sum of every level's component.
InteractionVector synthesize_phases(const LevelPhases& phases, const LevelSpec& spec,
                                    const PhaseGrid& grid);

/// Sum of the components of levels [from, v) for each entry of level `from`.
std::vector<PhaseIndex> upper_phases(const LevelPhases& phases, const LevelSpec& spec,
                                     const PhaseGrid& grid, std::size_t from);

/// Combined channel seen by level `level` (0-based): entry g sums its block of
/// elements rotated by the synthesized phases of levels below `level`.
/// Unnormalized; length spec.entries(level). Only levels < `level` are read.
CompositeChannel effective_channel(const CompositeChannel& c, const LevelSpec& spec,
                                   const LevelPhases& lower, const PhaseGrid& grid,
                                   std::size_t level);

/// |direct sum - nested multi-level sum| for the given phases.
double decomposition_identity_check(const CompositeChannel& c, const LevelSpec& spec,
                                    const LevelPhases& phases, const PhaseGrid& grid);

}  // namespace ris
