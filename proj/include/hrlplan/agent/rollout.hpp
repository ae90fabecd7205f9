#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hrlplan/agent/policy.hpp"
#include "hrlplan/agent/transition.hpp"
#include "hrlplan/control/executor.hpp"
#include "hrlplan/control/primitives.hpp"
#include "hrlplan/sim/episode.hpp"
#include "hrlplan/sim/rewards.hpp"
#include "hrlplan/sim/world.hpp"

namespace hrlplan::agent {

enum class Actuation {
  Pid,     // waypoint menu tracked by the PID executor
  Direct,  // planner choices index open-loop throttle/steer primitives
};

struct RolloutConfig {
  sim::ScenarioConfig scenario{};
  sim::RewardWeights weights{};
  control::ControllerConfig control{};
  control::PrimitiveTable primitives{};
  Actuation actuation = Actuation::Pid;
  bool noise = false;
  sim::NoiseStd noise_std{};
  bool randomize = true;
};

/// Chooses a macro action from the (possibly noised) history; `truth` is the
/// noiseless latest observation, used only by rule-based warm starts.
using PolicyFn = std::function<Decision(const sim::HistoryVector& history,
                                        const sim::Observation& truth)>;

struct TraceRow {
  control::TickSample tick;
  OptionId option = OptionId::LaneFollowWait;
  PlannerChoice choice = PlannerChoice::Choice0;
};

struct EpisodeRecord {
  sim::EpisodeResult result;
  Episode transitions;
  std::vector<TraceRow> trace;
};

/// Executes one macro decision from the current world state.
control::SubTrajectoryOutcome execute_decision(sim::WorldState& w, const RolloutConfig& cfg,
                                               const Decision& d,
                                               control::EpisodeTracker& tracker);

/// Runs one episode to a terminal event. The scenario is drawn from `seed`;
/// observation noise uses an independent stream derived from it.
EpisodeRecord run_episode(const RolloutConfig& cfg, std::uint64_t seed, const PolicyFn& policy,
                          int episode_id = 0, bool keep_trace = false);

/// Stateless 64-bit mixer used to derive per-episode seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace hrlplan::agent
