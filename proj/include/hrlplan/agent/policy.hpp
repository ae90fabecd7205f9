#pragma once

#include <random>
#include <span>

#include "hrlplan/agent/encoding.hpp"
#include "hrlplan/nn/network.hpp"
#include "hrlplan/sim/observation.hpp"
#include "hrlplan/sim/world.hpp"

namespace hrlplan::agent {

struct Decision {
  OptionId option = OptionId::LaneFollowWait;
  PlannerChoice choice = PlannerChoice::Choice0;

  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Linear decay from `start` to `end` over `horizon` episodes, then flat.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  int horizon = 1500;

  double at(int episode) const;
};

/// Uniform action with probability epsilon, else argmax (lowest index on
/// ties). One uniform draw is always consumed, plus one more on explore.
int epsilon_greedy(std::span<const double> q, double epsilon, std::mt19937_64& rng);

OptionId select_option(const nn::NetworkParams<double>& options_net, const sim::HistoryVector& h,
                       double epsilon, std::mt19937_64& rng, const Normalization& norm = {});

PlannerChoice select_planner(const nn::NetworkParams<double>& planner_net,
                             const sim::HistoryVector& h, OptionId option, double epsilon,
                             std::mt19937_64& rng, const Normalization& norm = {});

/// Thresholds shared by the rule-based warm start and the slot-based baseline.
struct RuleParams {
  double change_trigger = 35.0;  // obstacle distance that arms a lane change
  double gap_margin = 3.0;       // warm start: target-lane gap beyond the 9 m threshold
  double slot_factor = 1.25;     // slot-based: gap > factor * threshold
};

/// Long/short/wait choice from the gap to the vehicle ahead in the ego lane.
PlannerChoice follow_choice(const sim::Observation& obs, const sim::ScenarioConfig& cfg);

/// Deterministic rules used to seed the replay buffer.
Decision warm_start_policy(const sim::Observation& obs, const sim::ScenarioConfig& cfg,
                           const RuleParams& rules = {});

}  // namespace hrlplan::agent
