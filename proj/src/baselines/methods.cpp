#include "hrlplan/baselines/methods.hpp"

#include <algorithm>

#include "hrlplan/sim/rewards.hpp"

namespace hrlplan::baselines {

namespace {

struct Names {
  Method method;
  std::string_view name;
  std::string_view label;
};

constexpr std::array<Names, 5> kNames{{
    {Method::DdqnPid, "ddqn-pid", "DDQN + PID"},
    {Method::HDdqnNoPid, "hddqn", "Hierarchical DDQN (hDDQN)"},
    {Method::SlotBasedPid, "slot-based-pid", "Slot-based + PID"},
    {Method::HDdqnPid, "hddqn-pid", "hDDQN + PID"},
    {Method::HDdqnPidLstm, "hddqn-pid-lstm", "hDDQN + PID + LSTM"},
}};

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& n : kNames)
    if (n.method == m) return n.name;
  return "unknown";
}

std::string_view method_label(Method m) {
  for (const auto& n : kNames)
    if (n.method == m) return n.label;
  return "unknown";
}

std::optional<Method> parse_method(std::string_view s) {
  for (const auto& n : kNames)
    if (s == n.name || s == n.label) return n.method;
  return std::nullopt;
}

std::vector<MethodSpec> comparison_rows() {
  return {{Method::DdqnPid, false},      {Method::HDdqnNoPid, false},
          {Method::SlotBasedPid, false}, {Method::SlotBasedPid, true},
          {Method::HDdqnPid, false},     {Method::HDdqnPid, true},
          {Method::HDdqnPidLstm, false}, {Method::HDdqnPidLstm, true}};
}

bool is_learned(Method m) { return m != Method::SlotBasedPid; }

agent::Actuation actuation_of(Method m) {
  return m == Method::HDdqnNoPid ? agent::Actuation::Direct : agent::Actuation::Pid;
}

control::PrimitiveTable default_primitive_table() {
  control::PrimitiveTable t;
  t.entries[index_of(OptionId::LaneFollowWait)] = {
      control::Primitive{0.7, 0.0, false}, control::Primitive{0.4, 0.0, false},
      control::Primitive{-0.5, 0.0, false}};
  t.entries[index_of(OptionId::LaneChange)] = {control::Primitive{0.6, 0.6, true},
                                               control::Primitive{0.6, 0.8, true},
                                               control::Primitive{0.6, 1.0, true}};
  t.burst_ticks = 30;
  return t;
}

agent::AgentConfig agent_config_for(Method m, agent::AgentConfig base) {
  base.encoder = m == Method::HDdqnPidLstm ? nn::Encoder::Lstm : nn::Encoder::Dense;
  return base;
}

std::unique_ptr<agent::Learner> make_learner(Method m, const agent::AgentConfig& cfg,
                                             std::uint64_t seed) {
  const auto c = agent_config_for(m, cfg);
  switch (m) {
    case Method::DdqnPid:
      return std::make_unique<agent::FlatLearner>(c, seed);
    case Method::HDdqnNoPid:
    case Method::HDdqnPid:
    case Method::HDdqnPidLstm:
      return std::make_unique<agent::HierarchicalLearner>(c, seed);
    case Method::SlotBasedPid:
      break;
  }
  return nullptr;
}

agent::Decision slot_based_policy(const sim::Observation& obs, const sim::ScenarioConfig& cfg,
                                  const agent::RuleParams& rules) {
  const auto front = sim::front_vehicle(obs);
  const bool blocked = front.present && front.which == sim::Other::Obstacle &&
                       front.gap < rules.change_trigger;
  if (blocked) {
    const PlannerChoice profile = sim::expected_change_profile(obs.ego_speed, cfg);
    const double offset = profile == PlannerChoice::Choice0   ? cfg.change_fast
                          : profile == PlannerChoice::Choice1 ? cfg.change_normal
                                                              : cfg.change_sharp;
    const double duration = offset / std::max(obs.ego_speed, 1.0);
    const int dest = sim::other_lane(obs.ego_lane, cfg.lanes);
    bool free = true;
    for (auto f : {sim::Other::CarA, sim::Other::CarB}) {
      const auto& r = obs[f];
      if (r.lane_id != dest || r.chase >= sim::kBehindSentinel) continue;
      const double need = rules.slot_factor * sim::safe_threshold(f);
      const double later = r.chase + (r.speed - obs.ego_speed) * duration;
      if (r.chase <= need || later <= need) free = false;
    }
    if (free) return {OptionId::LaneChange, profile};
  }
  return {OptionId::LaneFollowWait, agent::follow_choice(obs, cfg)};
}

}  // namespace hrlplan::baselines
