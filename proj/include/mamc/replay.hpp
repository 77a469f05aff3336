#pragma once

#include <cstddef>
#include <vector>

#include "mamc/rng.hpp"

namespace mamc {

struct Transition {
  std::vector<double> state;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminated = false;  // truncation is not stored; truncated ends still bootstrap
};

// Fixed-capacity ring buffer with FIFO eviction and uniform sampling with
// replacement. Sampling never mutates the buffer.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }

  // i = 0 is the oldest stored transition.
  const Transition& at(std::size_t i) const;

  std::vector<Transition> sample(std::size_t n, RandomStream& rng) const;

 private:
  std::vector<Transition> data_;
  std::size_t capacity_;
  std::size_t next_ = 0;  // ring write position once full
};

}  // namespace mamc
