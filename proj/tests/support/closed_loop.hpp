#pragma once

// Closed-loop PID scenarios shared by the unit and acceptance suites: the
// executor drives the ego on an empty straight road.

#include <cmath>
#include <vector>

#include "hrlplan/control/executor.hpp"
#include "hrlplan/sim/world.hpp"

namespace closed_loop {

using namespace hrlplan;

inline sim::ScenarioConfig long_road() {
  sim::ScenarioConfig cfg;
  cfg.lanes.lane_length = 2000.0;
  cfg.goal_x = 1900.0;
  cfg.timeout_ticks = 100000;
  cfg.obstacle_rear = 1500.0;
  cfg.obstacle_rear_range = {1400.0, 1600.0};
  return cfg;
}

inline sim::WorldState empty_world(const sim::ScenarioConfig& cfg, double speed, double y) {
  sim::WorldState w = sim::reset(cfg, 1, false);
  for (auto& o : w.others) o.position.x() = -500.0;
  w.ego.speed = speed;
  w.ego.position.y() = y;
  return w;
}

struct Sample {
  double t;
  double y;
  double speed;
};

/// Follows midline waypoints `spacing` ahead at `target` m/s for `seconds`.
inline std::vector<Sample> follow_midline(double initial_speed, double initial_offset,
                                          double target, double seconds, double spacing = 10.0,
                                          const control::ControllerConfig& control = {}) {
  const sim::ScenarioConfig cfg = long_road();
  sim::WorldState w = empty_world(cfg, initial_speed, initial_offset);
  control::EpisodeTracker tracker;
  std::vector<Sample> out;
  const int total = static_cast<int>(std::lround(seconds * cfg.tick_rate));
  while (w.tick < total) {
    control::MacroContext ctx;
    const Eigen::Vector2d wp(w.ego.position.x() + spacing, cfg.lanes.center_y(0));
    auto r = control::execute_subtrajectory(w, cfg, {}, wp, target, control,
                                            total - w.tick, ctx, tracker);
    for (const auto& s : r.trace) out.push_back({s.tick * cfg.dt(), s.y, s.speed});
    if (r.terminal_event) break;
  }
  return out;
}

/// Largest |y| (or |speed - target|) at or after time `from`.
inline double max_lateral_after(const std::vector<Sample>& s, double from) {
  double m = 0.0;
  for (const auto& x : s)
    if (x.t >= from) m = std::max(m, std::abs(x.y));
  return m;
}

inline double max_speed_error_after(const std::vector<Sample>& s, double target, double from) {
  double m = 0.0;
  for (const auto& x : s)
    if (x.t >= from) m = std::max(m, std::abs(x.speed - target));
  return m;
}

}  // namespace closed_loop
