#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "hrlplan/control/pid.hpp"
#include "hrlplan/sim/rewards.hpp"
#include "hrlplan/sim/world.hpp"

namespace hrlplan::control {

struct ControllerConfig {
  PidGains longitudinal = default_longitudinal_gains();
  PidGains lateral = default_lateral_gains();
  double arrival_radius = 1.0;
  int subtrajectory_budget = 300;
  // A zero-speed target ends the sub-trajectory after this many stopped ticks.
  int wait_hold_ticks = 30;
  double stopped_speed = 0.05;
  // Largest throttle change per second; 0 disables the limit.
  double throttle_rate = 2.0;
};

enum class TerminalEvent { Collision, Success, Timeout };

/// One simulated tick as seen by the trace and the metrics.
struct TickSample {
  int tick = 0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  double accel = 0.0;
  double jerk = 0.0;
  double throttle = 0.0;
  double steer = 0.0;
  double r_option = 0.0;
  double r_planner = 0.0;
  sim::Events events{};
  bool invasion_onset = false;
};

struct SubTrajectoryOutcome {
  int ticks_used = 0;
  bool reached = false;
  std::optional<TerminalEvent> terminal_event;
  double r_option = 0.0;
  double r_planner = 0.0;
  int lane_invasions = 0;
  std::vector<TickSample> trace;
};

/// Who owns the macro step: the reward attribution and the lane-invasion gate.
struct MacroContext {
  OptionId option = OptionId::LaneFollowWait;
  PlannerChoice choice = PlannerChoice::Choice0;
  bool decision_pending = true;  // next tick carries the decision penalties
};

/// Episode-scoped bookkeeping carried across sub-trajectories.
struct EpisodeTracker {
  double prev_accel = 0.0;
  double prev_throttle = 0.0;
  bool invading = false;
};

/// Per-tick callback producing (throttle, steer).
struct Actuator {
  virtual ~Actuator() = default;
  virtual void begin(const sim::WorldState& w) = 0;
  virtual std::pair<double, double> act(const sim::WorldState& w, double dt) = 0;
  /// Returns true once the actuator's goal is met; sets `reached`.
  virtual bool done(const sim::WorldState& w, bool& reached) = 0;
};

/// Shared tick loop: actuate, step physics, detect events, accumulate rewards.
SubTrajectoryOutcome run_ticks(sim::WorldState& w, const sim::ScenarioConfig& cfg,
                               const sim::RewardWeights& weights, Actuator& actuator,
                               int tick_budget, MacroContext& ctx, EpisodeTracker& tracker);

/// Tracks `waypoint` at `target_speed` with fresh longitudinal and lateral PID
/// controllers at the scenario tick rate until the ego passes the waypoint, a
/// terminal event fires, or `tick_budget` ticks elapse.
SubTrajectoryOutcome execute_subtrajectory(sim::WorldState& w, const sim::ScenarioConfig& cfg,
                                           const sim::RewardWeights& weights,
                                           const Eigen::Vector2d& waypoint, double target_speed,
                                           const ControllerConfig& control, int tick_budget,
                                           MacroContext& ctx, EpisodeTracker& tracker);

/// Appends `more` onto `into` (ticks, rewards, trace, terminal event).
void append(SubTrajectoryOutcome& into, SubTrajectoryOutcome&& more);

}  // namespace hrlplan::control
