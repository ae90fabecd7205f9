#include "hrlplan/control/executor.hpp"

#include <algorithm>
#include <cmath>

namespace hrlplan::control {

SubTrajectoryOutcome run_ticks(sim::WorldState& w, const sim::ScenarioConfig& cfg,
                               const sim::RewardWeights& weights, Actuator& actuator,
                               int tick_budget, MacroContext& ctx, EpisodeTracker& tracker) {
  const double dt = cfg.dt();
  SubTrajectoryOutcome out;
  w.active_option = ctx.option;
  actuator.begin(w);
  const int budget = std::max(1, tick_budget);
  for (int i = 0; i < budget; ++i) {
    const sim::WorldState prev = w;
    const auto [throttle, steer] = actuator.act(w, dt);
    sim::step_physics(w, cfg, throttle, steer, dt);
    const sim::Events ev = sim::detect_events(w, cfg);
    const sim::RewardPair r = sim::compute_rewards(prev, w, cfg, weights, ctx.option,
                                                   ctx.choice, ev, ctx.decision_pending);
    ctx.decision_pending = false;

    TickSample s;
    s.tick = w.tick;
    s.x = w.ego.position.x();
    s.y = w.ego.position.y();
    s.heading = w.ego.heading;
    s.speed = w.ego.speed;
    s.accel = w.ego_accel;
    s.jerk = (w.ego_accel - tracker.prev_accel) / dt;
    s.throttle = throttle;
    s.steer = steer;
    s.r_option = r.option;
    s.r_planner = r.planner;
    s.events = ev;
    s.invasion_onset = ev.lane_invasion && !tracker.invading;
    tracker.prev_accel = w.ego_accel;
    tracker.prev_throttle = throttle;
    tracker.invading = ev.lane_invasion;

    out.trace.push_back(s);
    out.ticks_used += 1;
    out.r_option += r.option;
    out.r_planner += r.planner;
    if (s.invasion_onset) out.lane_invasions += 1;

    if (ev.collision) {
      out.terminal_event = TerminalEvent::Collision;
      break;
    }
    if (ev.success) {
      out.terminal_event = TerminalEvent::Success;
      break;
    }
    if (ev.timeout) {
      out.terminal_event = TerminalEvent::Timeout;
      break;
    }
    bool reached = false;
    if (actuator.done(w, reached)) {
      out.reached = reached;
      break;
    }
  }
  return out;
}

namespace {

class WaypointTracker final : public Actuator {
 public:
  WaypointTracker(const Eigen::Vector2d& waypoint, double target_speed,
                  const ControllerConfig& control, const EpisodeTracker& episode)
      : waypoint_(waypoint),
        target_speed_(target_speed),
        control_(control),
        episode_(episode),
        longitudinal_(control.longitudinal),
        lateral_(control.lateral) {}

  void begin(const sim::WorldState&) override {
    longitudinal_.reset();
    lateral_.reset();
    stopped_ticks_ = 0;
  }

  std::pair<double, double> act(const sim::WorldState& w, double dt) override {
    double throttle = longitudinal_control(longitudinal_, w.ego.speed, target_speed_, dt);
    if (control_.throttle_rate > 0.0) {
      const double step = control_.throttle_rate * dt;
      throttle = std::clamp(throttle, episode_.prev_throttle - step,
                            episode_.prev_throttle + step);
    }
    const double steer = lateral_control(lateral_, w.ego, waypoint_, dt);
    return {throttle, steer};
  }

  bool done(const sim::WorldState& w, bool& reached) override {
    const Eigen::Vector2d delta = waypoint_ - w.ego.position;
    // The waypoint counts as passed once it is no longer ahead along the lane.
    if (delta.x() <= 0.0) {
      reached = std::abs(delta.y()) <= control_.arrival_radius;
      return true;
    }
    if (delta.norm() <= control_.arrival_radius) {
      reached = true;
      return true;
    }
    if (target_speed_ <= 0.0 && w.ego.speed <= control_.stopped_speed) {
      if (++stopped_ticks_ >= control_.wait_hold_ticks) {
        reached = false;
        return true;
      }
    } else {
      stopped_ticks_ = 0;
    }
    return false;
  }

 private:
  Eigen::Vector2d waypoint_;
  double target_speed_;
  ControllerConfig control_;
  const EpisodeTracker& episode_;
  PidController longitudinal_;
  PidController lateral_;
  int stopped_ticks_ = 0;
};

}  // namespace

SubTrajectoryOutcome execute_subtrajectory(sim::WorldState& w, const sim::ScenarioConfig& cfg,
                                           const sim::RewardWeights& weights,
                                           const Eigen::Vector2d& waypoint, double target_speed,
                                           const ControllerConfig& control, int tick_budget,
                                           MacroContext& ctx, EpisodeTracker& tracker) {
  WaypointTracker tracker_actuator(waypoint, target_speed, control, tracker);
  return run_ticks(w, cfg, weights, tracker_actuator, tick_budget, ctx, tracker);
}

void append(SubTrajectoryOutcome& into, SubTrajectoryOutcome&& more) {
  into.ticks_used += more.ticks_used;
  into.reached = more.reached;
  into.terminal_event = more.terminal_event;
  into.r_option += more.r_option;
  into.r_planner += more.r_planner;
  into.lane_invasions += more.lane_invasions;
  into.trace.insert(into.trace.end(), std::make_move_iterator(more.trace.begin()),
                    std::make_move_iterator(more.trace.end()));
}

}  // namespace hrlplan::control

#include "hrlplan/control/primitives.hpp"

namespace hrlplan::control {

namespace {

class PrimitiveBurst final : public Actuator {
 public:
  PrimitiveBurst(const Primitive& p, double sign, int burst) : p_(p), sign_(sign), burst_(burst) {}

  void begin(const sim::WorldState&) override { elapsed_ = 0; }

  std::pair<double, double> act(const sim::WorldState&, double) override {
    double steer = sign_ * p_.steer;
    if (p_.banked && 2 * elapsed_ >= burst_) steer = -steer;
    ++elapsed_;
    return {p_.throttle, steer};
  }

  bool done(const sim::WorldState&, bool& reached) override {
    reached = elapsed_ >= burst_;
    return reached;
  }

 private:
  Primitive p_;
  double sign_;
  int burst_;
  int elapsed_ = 0;
};

}  // namespace

SubTrajectoryOutcome execute_primitive(sim::WorldState& w, const sim::ScenarioConfig& cfg,
                                       const sim::RewardWeights& weights,
                                       const Primitive& primitive, double steer_sign,
                                       int burst_ticks, MacroContext& ctx,
                                       EpisodeTracker& tracker) {
  PrimitiveBurst burst(primitive, steer_sign, burst_ticks);
  return run_ticks(w, cfg, weights, burst, burst_ticks, ctx, tracker);
}

}  // namespace hrlplan::control
