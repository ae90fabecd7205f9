#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <random>
#include <stdexcept>
#include <vector>

#include "hrlplan/agent/transition.hpp"

namespace hrlplan::agent {

/// Bounded store of complete episodes. Eviction drops whole episodes,
/// oldest first, until the transition count fits the capacity (the newest
/// episode is always kept).
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

  void add_episode(Episode episode);

  std::size_t capacity() const { return capacity_; }
  std::size_t transition_count() const { return transitions_; }
  std::size_t episode_count() const { return episodes_.size(); }
  bool empty() const { return episodes_.empty(); }

  const Episode& episode(std::size_t i) const { return episodes_[i]; }

 private:
  std::size_t capacity_;
  std::size_t transitions_ = 0;
  std::deque<Episode> episodes_;
};

/// A contiguous run of `n_steps` transitions ending at `steps.back()`.
/// Leading positions before the episode start repeat step 0 and are counted
/// in `padded`.
struct SequenceWindow {
  std::size_t episode = 0;
  std::vector<std::size_t> steps;
  int padded = 0;
};

/// Bootstrapped random updates: episode uniform, then end position uniform
/// inside it. Windows never cross an episode boundary.
std::vector<SequenceWindow> sample_sequences(const ReplayBuffer& buffer, std::size_t batch,
                                             std::size_t n_steps, std::mt19937_64& rng);

}  // namespace hrlplan::agent
