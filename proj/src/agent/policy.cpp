#include "hrlplan/agent/policy.hpp"

#include <algorithm>

#include "hrlplan/agent/targets.hpp"
#include "hrlplan/sim/rewards.hpp"

namespace hrlplan::agent {

void encode_observation(const sim::Observation& obs, std::optional<OptionId> goal,
                        const Normalization& norm, Eigen::Ref<Eigen::VectorXd> out) {
  auto capped = [&](double x) { return std::min(x, norm.cap); };
  out[0] = obs.ego_speed / norm.speed;
  out[1] = obs.ego_lane;
  for (int f = 0; f < sim::kNumOthers; ++f) {
    const auto& r = obs.others[f];
    out[2 + 4 * f] = r.speed / norm.speed;
    out[3 + 4 * f] = capped(r.chase / norm.distance);
    out[4 + 4 * f] = capped(r.ratio / norm.ratio);
    out[5 + 4 * f] = r.lane_id;
  }
  if (goal) {
    out[kObservationFeatures] = *goal == OptionId::LaneFollowWait ? 1.0 : 0.0;
    out[kObservationFeatures + 1] = *goal == OptionId::LaneChange ? 1.0 : 0.0;
  }
}

void encode_history(const sim::HistoryVector& h, std::optional<OptionId> goal,
                    const Normalization& norm, Eigen::Ref<Eigen::VectorXd> out) {
  const int width = goal ? kGoalFeatures : kObservationFeatures;
  for (int t = 0; t < sim::HistoryVector::kLength; ++t) {
    encode_observation(h[t], goal, norm, out.segment(t * width, width));
  }
}

Eigen::VectorXd encode_history(const sim::HistoryVector& h, std::optional<OptionId> goal,
                               const Normalization& norm) {
  const int width = goal ? kGoalFeatures : kObservationFeatures;
  Eigen::VectorXd v(width * sim::HistoryVector::kLength);
  encode_history(h, goal, norm, v);
  return v;
}

double EpsilonSchedule::at(int episode) const {
  if (horizon <= 0 || episode >= horizon) return end;
  const double frac = static_cast<double>(std::max(episode, 0)) / horizon;
  return start + (end - start) * frac;
}

int epsilon_greedy(std::span<const double> q, double epsilon, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < epsilon) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(q.size()) - 1);
    return pick(rng);
  }
  return argmax(q);
}

OptionId select_option(const nn::NetworkParams<double>& options_net, const sim::HistoryVector& h,
                       double epsilon, std::mt19937_64& rng, const Normalization& norm) {
  const Eigen::VectorXd q = nn::predict(options_net, encode_history(h, std::nullopt, norm));
  return static_cast<OptionId>(epsilon_greedy({q.data(), static_cast<std::size_t>(q.size())},
                                              epsilon, rng));
}

PlannerChoice select_planner(const nn::NetworkParams<double>& planner_net,
                             const sim::HistoryVector& h, OptionId option, double epsilon,
                             std::mt19937_64& rng, const Normalization& norm) {
  const Eigen::VectorXd q = nn::predict(planner_net, encode_history(h, option, norm));
  return static_cast<PlannerChoice>(epsilon_greedy({q.data(), static_cast<std::size_t>(q.size())},
                                                   epsilon, rng));
}

PlannerChoice follow_choice(const sim::Observation& obs, const sim::ScenarioConfig& cfg) {
  const auto front = sim::front_vehicle(obs);
  if (!front.present) return PlannerChoice::Choice0;
  const double thr = sim::safe_threshold(front.which);
  if (front.gap >= thr + cfg.follow_long) return PlannerChoice::Choice0;
  if (front.gap >= thr + cfg.follow_short) return PlannerChoice::Choice1;
  return PlannerChoice::Choice2;
}

Decision warm_start_policy(const sim::Observation& obs, const sim::ScenarioConfig& cfg,
                           const RuleParams& rules) {
  const auto front = sim::front_vehicle(obs);
  const bool blocked = front.present && front.which == sim::Other::Obstacle &&
                       front.gap < rules.change_trigger;
  if (blocked) {
    const int dest = sim::other_lane(obs.ego_lane, cfg.lanes);
    bool clear = true;
    for (auto f : {sim::Other::CarA, sim::Other::CarB}) {
      const auto& r = obs[f];
      if (r.lane_id == dest && r.chase <= sim::kMovingSafeDistance + rules.gap_margin) clear = false;
    }
    if (clear) return {OptionId::LaneChange, sim::expected_change_profile(obs.ego_speed, cfg)};
  }
  return {OptionId::LaneFollowWait, follow_choice(obs, cfg)};
}

}  // namespace hrlplan::agent
