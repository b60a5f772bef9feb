#include "ris/wolpertinger.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ris/error.hpp"
#include "ris/scenario.hpp"

namespace ris {

std::vector<PhaseVector> knn_project(std::span<const double> proto, const PhaseGrid& grid,
                                     std::size_t k) {
  if (k == 0) throw ConfigError("knn_project needs k >= 1");
  const std::size_t n = proto.size();
  if (k > n + 1) {
    warn("knn_project: k = " + std::to_string(k) + " exceeds phases + 1 = " +
         std::to_string(n + 1) + "; clamped");
    k = n + 1;
  }
  PhaseVector base(n);
  PhaseVector alternate(n);
  std::vector<double> error(n);
  for (std::size_t i = 0; i < n; ++i) {
    base[i] = grid.nearest(proto[i]);
    const double signed_err = wrap_angle(proto[i] - grid.value(base[i]));
    error[i] = std::abs(signed_err);
    // The other neighbour lies on the side of the proto value; on-grid
    // values move one step counter-clockwise.
    alternate[i] = grid.shift(base[i], signed_err < 0.0 ? -1 : 1);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return error[a] > error[b]; });

  std::vector<PhaseVector> out;
  out.reserve(k);
  out.push_back(base);
  PhaseVector current = base;
  for (std::size_t j = 1; j < k; ++j) {
    const std::size_t e = order[j - 1];
    current[e] = alternate[e];
    out.push_back(current);
  }
  return out;
}

std::size_t select_action(const ActionValue& value, std::span<const PhaseIndex> state,
                          std::span<const PhaseVector> candidates) {
  if (candidates.empty()) throw DomainError("select_action with no candidates");
  std::size_t best = 0;
  double best_value = value(state, candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = value(state, candidates[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

std::vector<PhaseVector> enumerate_actions(std::size_t phases, const PhaseGrid& grid,
                                           std::size_t limit) {
  const double count = std::pow(static_cast<double>(grid.size()), static_cast<double>(phases));
  if (count > static_cast<double>(limit)) {
    throw SearchLimitError("action enumeration exceeds the limit of " + std::to_string(limit),
                           count, static_cast<double>(limit));
  }
  std::vector<PhaseVector> out;
  out.reserve(static_cast<std::size_t>(count));
  PhaseVector current(phases, 0);
  while (true) {
    out.push_back(current);
    std::size_t d = phases;
    while (d > 0 && current[d - 1] + 1 == grid.size()) {
      current[d - 1] = 0;
      --d;
    }
    if (d == 0) break;
    ++current[d - 1];
  }
  return out;
}

}  // namespace ris
