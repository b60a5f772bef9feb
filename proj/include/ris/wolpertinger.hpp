#pragma once

// Discrete action refinement for continuous proto-actions on the phase grid.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ris/phase_grid.hpp"

namespace ris {

using PhaseVector = std::vector<PhaseIndex>;

/// Candidate grid vectors near a continuous proto-action.
///
/// Candidate 1 rounds every element to its nearest grid value (ties to the
/// smaller index). Elements are then ranked by rounding error, largest first
/// (lower element index on ties); candidate j > 1 additionally moves the top
/// j - 1 of them to their other neighbouring grid value. Every candidate is
/// within one grid step per element of candidate 1 and all are distinct.
/// k is clamped to phases + 1 with a warning.
std::vector<PhaseVector> knn_project(std::span<const double> proto, const PhaseGrid& grid,
                                     std::size_t k);

/// Scores (state, action) pairs; higher is better.
using ActionValue =
    std::function<double(std::span<const PhaseIndex> state, std::span<const PhaseIndex> action)>;

/// Index of the highest-valued candidate; the first one wins ties.
std::size_t select_action(const ActionValue& value, std::span<const PhaseIndex> state,
                          std::span<const PhaseVector> candidates);

/// Every vector of the grid with the given length, lexicographic order.
std::vector<PhaseVector> enumerate_actions(std::size_t phases, const PhaseGrid& grid,
                                           std::size_t limit = std::size_t{1} << 20);

}  // namespace ris
