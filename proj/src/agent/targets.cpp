#include "hrlplan/agent/targets.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hrlplan::agent {

int argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty value array");
  int best = 0;
  for (int k = 1; k < static_cast<int>(values.size()); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

double ddqn_target(double reward, bool terminal, std::span<const double> q_online_next,
                   std::span<const double> q_target_next, double gamma) {
  if (q_online_next.empty() || q_online_next.size() != q_target_next.size())
    throw std::invalid_argument("ddqn_target: value arrays must be nonempty and equal length");
  if (terminal) return reward;
  return reward + gamma * q_target_next[argmax(q_online_next)];
}

double max_target(double reward, bool terminal, std::span<const double> q_next, double gamma) {
  if (q_next.empty()) throw std::invalid_argument("max_target: empty value array");
  if (terminal) return reward;
  return reward + gamma * *std::max_element(q_next.begin(), q_next.end());
}

double option_target(std::span<const double> rewards, bool terminal,
                     std::span<const double> q_online_next, std::span<const double> q_target_next,
                     double gamma, bool double_q) {
  if (rewards.empty()) throw std::invalid_argument("option_target: empty reward list");
  const double sum = std::accumulate(rewards.begin(), rewards.end(), 0.0);
  return double_q ? ddqn_target(sum, terminal, q_online_next, q_target_next, gamma)
                  : max_target(sum, terminal, q_target_next, gamma);
}

double planner_target(double reward, bool goal_terminal, std::span<const double> q_online_next,
                      std::span<const double> q_target_next, double gamma) {
  return ddqn_target(reward, goal_terminal, q_online_next, q_target_next, gamma);
}

}  // namespace hrlplan::agent
