#pragma once

#include <span>

namespace hrlplan::agent {

/// Index of the largest value; ties resolve to the lowest index.
int argmax(std::span<const double> values);

/// Double-Q target: r, or r + gamma * q_target_next[argmax q_online_next].
double ddqn_target(double reward, bool terminal, std::span<const double> q_online_next,
                   std::span<const double> q_target_next, double gamma);

/// Single-estimator target r + gamma * max q_next.
double max_target(double reward, bool terminal, std::span<const double> q_next, double gamma);

/// Meta-controller target: the rewards collected over one sub-trajectory
/// plus a double-Q bootstrap over options (or plain max when
/// `double_q` is off).
double option_target(std::span<const double> rewards, bool terminal,
                     std::span<const double> q_online_next, std::span<const double> q_target_next,
                     double gamma, bool double_q = true);

/// Controller target under a fixed goal. The bootstrap is cut when the goal
/// ends (episode end or option switch).
double planner_target(double reward, bool goal_terminal, std::span<const double> q_online_next,
                      std::span<const double> q_target_next, double gamma);

}  // namespace hrlplan::agent
