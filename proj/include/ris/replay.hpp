#pragma once

#include <cstddef>
#include <vector>

#include "ris/phase_grid.hpp"
#include "ris/rng.hpp"

namespace ris {

/// One environment transition. The action is the next state, so it is
/// stored once.
struct Transition {
  std::vector<PhaseIndex> state;
  std::vector<PhaseIndex> action;  // == next state
  int reward = -1;                 // +1 or -1
};

/// Fixed-capacity ring buffer; evicts the oldest transition when full.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 0);

  void push(Transition t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return size_ == 0; }
  void clear();

  /// i-th oldest stored transition, 0 <= i < size().
  const Transition& at(std::size_t i) const;

  /// Uniform sample with replacement.
  std::vector<const Transition*> sample(std::size_t count, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next write slot
  std::size_t size_ = 0;
  std::vector<Transition> slots_;
};

}  // namespace ris
