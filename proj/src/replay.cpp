#include "ris/replay.hpp"

#include "ris/error.hpp"

namespace ris {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  slots_.reserve(capacity_);
}

void ReplayBuffer::push(Transition t) {
  if (capacity_ == 0) return;
  if (slots_.size() < capacity_) {
    slots_.push_back(std::move(t));
  } else {
    slots_[head_] = std::move(t);
  }
  head_ = (head_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

void ReplayBuffer::clear() {
  slots_.clear();
  head_ = 0;
  size_ = 0;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw IndexError("replay buffer index out of range");
  const std::size_t oldest = size_ < capacity_ ? 0 : head_;
  return slots_[(oldest + i) % capacity_];
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
  if (size_ == 0) throw DomainError("sampling from an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<const Transition*> out(count);
  for (auto& p : out) p = &slots_[pick(rng)];
  return out;
}

}  // namespace ris
