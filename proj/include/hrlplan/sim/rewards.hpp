#pragma once

#include "hrlplan/sim/world.hpp"

namespace hrlplan::sim {

/// Magnitudes only; signs are applied where each term is used.
struct RewardWeights {
  double sigma1 = 0.1;    // per-tick time penalty
  double sigma2 = 0.5;    // per meter of longitudinal progress
  double sigma3 = 100.0;  // collision
  double sigma4 = 1.0;    // goal / choice not required
  double sigma5 = 1.0;    // lane-change profile mismatch
  double sigma6 = 100.0;  // success
};

struct RewardPair {
  double option = 0.0;
  double planner = 0.0;
};

double unsafe_penalty(double ratio);

/// Lane-change profile expected at the given ego speed.
PlannerChoice expected_change_profile(double ego_speed, const ScenarioConfig& cfg);

/// Per-tick reward for both hierarchy levels. Decision penalties (sigma4,
/// sigma5) are judged on `prev` and only added when `decision_tick` is set,
/// i.e. once per macro step.
RewardPair compute_rewards(const WorldState& prev, const WorldState& next,
                           const ScenarioConfig& cfg, const RewardWeights& weights,
                           OptionId option, PlannerChoice choice, const Events& events,
                           bool decision_tick);

}  // namespace hrlplan::sim
