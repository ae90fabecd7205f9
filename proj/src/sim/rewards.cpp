#include "hrlplan/sim/rewards.hpp"

#include <cmath>

namespace hrlplan::sim {

double unsafe_penalty(double ratio) { return std::exp(-ratio); }

PlannerChoice expected_change_profile(double ego_speed, const ScenarioConfig& cfg) {
  if (ego_speed >= cfg.fast_band_speed) return PlannerChoice::Choice0;
  if (ego_speed < cfg.sharp_band_speed) return PlannerChoice::Choice2;
  return PlannerChoice::Choice1;
}

RewardPair compute_rewards(const WorldState& prev, const WorldState& next,
                           const ScenarioConfig& cfg, const RewardWeights& weights,
                           OptionId option, PlannerChoice choice, const Events& events,
                           bool decision_tick) {
  double shared = -weights.sigma1;
  shared += weights.sigma2 * (next.ego.position.x() - prev.ego.position.x());
  const auto front = front_vehicle(observe(next));
  if (front.present) shared -= unsafe_penalty(front.ratio);
  if (events.collision) shared -= weights.sigma3;
  if (events.success) shared += weights.sigma6;

  RewardPair r{shared, shared};
  if (!decision_tick) return r;

  const auto before = front_vehicle(observe(prev));
  if (option == OptionId::LaneChange) {
    // Changing lanes with nothing ahead in the current lane is not required.
    if (!before.present) r.option -= weights.sigma4;
    if (choice != expected_change_profile(prev.ego.speed, cfg)) r.planner -= weights.sigma5;
  } else if (choice == PlannerChoice::Choice2) {
    const bool clear =
        !before.present || before.gap >= safe_threshold(before.which) + cfg.follow_long;
    if (clear) r.planner -= weights.sigma4;
  }
  return r;
}

}  // namespace hrlplan::sim

#include "hrlplan/sim/episode.hpp"

namespace hrlplan::sim {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Success:
      return "success";
    case Outcome::Collision:
      return "collision";
    case Outcome::Timeout:
      return "timeout";
  }
  return "unknown";
}

}  // namespace hrlplan::sim
