#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrlplan/agent/trainer.hpp"
#include "hrlplan/control/primitives.hpp"

namespace hrlplan::baselines {

enum class Method { DdqnPid, HDdqnNoPid, SlotBasedPid, HDdqnPid, HDdqnPidLstm };

struct MethodSpec {
  Method method = Method::HDdqnPidLstm;
  bool noise = false;

  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

/// Short CLI name, e.g. "hddqn-pid-lstm".
std::string_view method_name(Method m);
/// Row label as printed in the comparison table, e.g. "hDDQN + PID + LSTM".
std::string_view method_label(Method m);
/// Accepts either the short name or the row label.
std::optional<Method> parse_method(std::string_view s);

inline constexpr std::array<Method, 5> kAllMethods{Method::DdqnPid, Method::HDdqnNoPid,
                                                   Method::SlotBasedPid, Method::HDdqnPid,
                                                   Method::HDdqnPidLstm};

/// The eight (method, noise) rows of the comparison table, in table order.
std::vector<MethodSpec> comparison_rows();

bool is_learned(Method m);
agent::Actuation actuation_of(Method m);

/// Direct-control primitives: accelerate / coast / brake {(0.5, 0), (0, 0),
/// (-0.5, 0)} under LaneFollowWait; coasting with banked steer 0.6 / 0.8 / 1.0
/// under LaneChange (fast / normal / sharp); 30-tick bursts. Coasting keeps
/// the speed constant so the two halves of a banked burst cancel in heading.
/// Synthetic by construction.
control::PrimitiveTable default_primitive_table();

/// Applies the method's architecture choices (encoder) to a base config.
agent::AgentConfig agent_config_for(Method m, agent::AgentConfig base);

/// Builds the trainable policy for a learned method; nullptr for rule-based.
std::unique_ptr<agent::Learner> make_learner(Method m, const agent::AgentConfig& cfg,
                                             std::uint64_t seed);

/// Warm-start rules plus a gap-slot acceptance test on the destination lane:
/// each car there must exceed slot_factor times its safety threshold both now
/// and after the lane change duration at current speeds.
agent::Decision slot_based_policy(const sim::Observation& obs, const sim::ScenarioConfig& cfg,
                                  const agent::RuleParams& rules = {});

}  // namespace hrlplan::baselines
