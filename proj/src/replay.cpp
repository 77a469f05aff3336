#include "mamc/replay.hpp"

#include <stdexcept>
#include <utility>

namespace mamc {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
  } else {
    data_[next_] = std::move(t);
    next_ = (next_ + 1) % capacity_;
  }
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= data_.size()) throw std::out_of_range("replay index out of range");
  if (data_.size() < capacity_) return data_[i];
  return data_[(next_ + i) % capacity_];
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, RandomStream& rng) const {
  if (data_.empty()) throw std::logic_error("cannot sample from an empty replay buffer");
  std::vector<Transition> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(data_[rng.uniform_index(data_.size())]);
  }
  return out;
}

}  // namespace mamc
