#include "hrlplan/agent/replay.hpp"

namespace hrlplan::agent {

void ReplayBuffer::add_episode(Episode episode) {
  if (episode.empty()) return;
  transitions_ += episode.size();
  episodes_.push_back(std::move(episode));
  while (transitions_ > capacity_ && episodes_.size() > 1) {
    transitions_ -= episodes_.front().size();
    episodes_.pop_front();
  }
}

std::vector<SequenceWindow> sample_sequences(const ReplayBuffer& buffer, std::size_t batch,
                                             std::size_t n_steps, std::mt19937_64& rng) {
  if (buffer.empty()) throw std::invalid_argument("sample_sequences: empty replay buffer");
  if (n_steps == 0) throw std::invalid_argument("sample_sequences: n_steps must be positive");
  std::uniform_int_distribution<std::size_t> pick_episode(0, buffer.episode_count() - 1);
  std::vector<SequenceWindow> out;
  out.reserve(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    SequenceWindow win;
    win.episode = pick_episode(rng);
    const std::size_t len = buffer.episode(win.episode).size();
    std::uniform_int_distribution<std::size_t> pick_end(0, len - 1);
    const std::size_t end = pick_end(rng);
    win.steps.resize(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
      const std::size_t back = n_steps - 1 - k;
      if (back > end) {
        win.steps[k] = 0;
        ++win.padded;
      } else {
        win.steps[k] = end - back;
      }
    }
    out.push_back(std::move(win));
  }
  return out;
}

}  // namespace hrlplan::agent
