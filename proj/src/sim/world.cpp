#include "hrlplan/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hrlplan::sim {

double step_bicycle(VehicleState& v, double throttle, double steer, double dt,
                    const VehicleLimits& limits) {
  throttle = std::clamp(throttle, -1.0, 1.0);
  steer = std::clamp(steer, -1.0, 1.0);
  const double accel = throttle >= 0.0 ? throttle * limits.max_accel : throttle * limits.max_decel;
  const double delta = steer * limits.max_steer;

  v.position.x() += v.speed * std::cos(v.heading) * dt;
  v.position.y() += v.speed * std::sin(v.heading) * dt;
  v.heading = wrap_angle(v.heading + v.speed * std::tan(delta) / limits.wheelbase * dt);

  const double before = v.speed;
  v.speed = std::max(0.0, v.speed + accel * dt);
  return (v.speed - before) / dt;
}

double turning_radius(double steer, const VehicleLimits& limits) {
  const double t = std::tan(std::abs(std::clamp(steer, -1.0, 1.0)) * limits.max_steer);
  return t == 0.0 ? std::numeric_limits<double>::infinity() : limits.wheelbase / t;
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(lanes.lane_width > 0.0, "lane_width must be positive");
  require(lanes.lane_length > 0.0, "lane_length must be positive");
  require(lanes.lane_count == 2, "lane_count is fixed at 2");
  require(ego_lane >= 0 && ego_lane < 2 && target_lane >= 0 && target_lane < 2 &&
              ego_lane != target_lane,
          "ego_lane and target_lane must be the two distinct lanes");
  require(tick_rate > 0 && timeout_ticks > 0, "tick_rate and timeout_ticks must be positive");
  require(vehicle_length > 0.0 && vehicle_width > 0.0, "vehicle footprint must be positive");
  require(limits.wheelbase > 0.0 && limits.max_accel > 0.0 && limits.max_decel > 0.0 &&
              limits.max_steer > 0.0,
          "vehicle limits must be positive");
  require(goal_x > ego_start_x && goal_x <= lanes.lane_length, "goal_x must lie on the road");
  require(ego_initial_speed >= 0.0, "ego_initial_speed must be nonnegative");
  require(obstacle_rear_range.lo <= obstacle_rear_range.hi, "obstacle range is empty");
  require(obstacle_rear_range.lo > ego_start_front() && obstacle_rear > ego_start_front(),
          "obstacle must start ahead of the ego");
  require(obstacle_rear_range.hi + vehicle_length <= lanes.lane_length &&
              obstacle_rear + vehicle_length <= lanes.lane_length,
          "obstacle range beyond lane_length");
  require(car_a_gap_range.lo <= car_a_gap_range.hi && car_b_gap_range.lo <= car_b_gap_range.hi,
          "target car gap range is empty");
  require(car_a_gap_range.lo >= 0.0 && car_b_gap_range.lo >= 0.0 && car_a_gap >= 0.0 &&
              car_b_gap >= 0.0,
          "target car gaps must be nonnegative");
  require(target_speed_range.lo >= 0.0 && target_speed_range.lo <= target_speed_range.hi &&
              car_a_speed >= 0.0 && car_b_speed >= 0.0,
          "target car speeds must be nonnegative");
  require(follow_long > follow_short && follow_short > wait_distance && wait_distance > 0.0,
          "follow offsets must satisfy long > short > wait > 0");
  require(change_fast > change_normal && change_normal > change_sharp && change_sharp > 0.0,
          "lane-change offsets must satisfy fast > normal > sharp > 0");
  require(safety_follow_distance > 0.0 && safety_min_offset > 0.0 && safety_margin >= 0.0,
          "safety follow parameters must be positive");
  require(sharp_band_speed <= fast_band_speed, "speed bands must be ordered");
}

WorldState reset(const ScenarioConfig& cfg, std::uint64_t seed, bool randomize) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  auto draw = [&](const Interval& r, double fixed) {
    std::uniform_real_distribution<double> u(r.lo, r.hi);
    const double x = u(rng);
    return randomize ? x : fixed;
  };

  WorldState w;
  auto make = [&](double center_x, int lane, double speed) {
    VehicleState v;
    v.position = cfg.lanes.midline(lane, center_x);
    v.speed = speed;
    v.length = cfg.vehicle_length;
    v.width = cfg.vehicle_width;
    v.lane_id = lane;
    return v;
  };
  const double half = 0.5 * cfg.vehicle_length;
  w.ego = make(cfg.ego_start_x, cfg.ego_lane, cfg.ego_initial_speed);

  const double obstacle_rear = draw(cfg.obstacle_rear_range, cfg.obstacle_rear);
  const double gap_a = draw(cfg.car_a_gap_range, cfg.car_a_gap);
  const double gap_b = draw(cfg.car_b_gap_range, cfg.car_b_gap);
  const double speed_a = draw(cfg.target_speed_range, cfg.car_a_speed);
  const double speed_b = draw(cfg.target_speed_range, cfg.car_b_speed);

  w.other(Other::Obstacle) = make(obstacle_rear + half, cfg.ego_lane, 0.0);
  const double a_rear = w.ego.front_s() + gap_a;
  w.other(Other::CarA) = make(a_rear + half, cfg.target_lane, speed_a);
  const double b_rear = a_rear + cfg.vehicle_length + gap_b;
  w.other(Other::CarB) = make(b_rear + half, cfg.target_lane, speed_b);
  return w;
}

void step_physics(WorldState& w, const ScenarioConfig& cfg, double throttle, double steer,
                  double dt) {
  w.ego_accel = step_bicycle(w.ego, throttle, steer, dt, cfg.limits);
  w.ego.lane_id = cfg.lanes.nearest_lane(w.ego.position.y());
  for (auto& v : w.others) v.position.x() += v.speed * dt;
  ++w.tick;
}

double chase_distance(const VehicleState& ego, const VehicleState& f) {
  if (f.front_s() < ego.rear_s()) return kBehindSentinel;
  return std::max(0.0, f.rear_s() - ego.front_s());
}

Observation observe(const WorldState& w) {
  Observation obs;
  obs.ego_speed = w.ego.speed;
  obs.ego_lane = w.ego.lane_id;
  for (int i = 0; i < kNumOthers; ++i) {
    const auto f = static_cast<Other>(i);
    auto& r = obs[f];
    r.speed = w.others[i].speed;
    r.chase = chase_distance(w.ego, w.others[i]);
    r.ratio = r.chase / safe_threshold(f);
    r.lane_id = w.others[i].lane_id;
  }
  return obs;
}

FrontVehicle front_vehicle(const Observation& obs) {
  FrontVehicle front;
  for (int i = 0; i < kNumOthers; ++i) {
    const auto f = static_cast<Other>(i);
    const auto& r = obs[f];
    if (r.lane_id != obs.ego_lane || r.chase >= kBehindSentinel) continue;
    if (!front.present || r.chase < front.gap) {
      front = {true, f, r.chase, r.ratio};
    }
  }
  return front;
}

bool outside_lane(const VehicleState& ego, const LaneGeometry& lanes) {
  const double lo = lanes.right_boundary(ego.lane_id);
  const double hi = lanes.left_boundary(ego.lane_id);
  for (const auto& c : ego.footprint().corners()) {
    if (c.y() < lo || c.y() > hi) return true;
  }
  return false;
}

Events detect_events(const WorldState& w, const ScenarioConfig& cfg) {
  Events e;
  const auto ego_box = w.ego.footprint();
  for (const auto& v : w.others) {
    if (overlaps(ego_box, v.footprint())) {
      e.collision = true;
      break;
    }
  }
  e.lane_invasion =
      w.active_option == OptionId::LaneFollowWait && outside_lane(w.ego, cfg.lanes);
  e.success = !e.collision && w.ego.position.x() >= cfg.goal_x;
  e.timeout = !e.collision && !e.success && w.tick >= cfg.timeout_ticks;
  return e;
}

int other_lane(int lane_id, const LaneGeometry& lanes) {
  return lane_id + 1 < lanes.lane_count ? lane_id + 1 : lane_id - 1;
}

std::array<Candidate, kNumChoices> waypoint_menu(const WorldState& w, const ScenarioConfig& cfg,
                                                 OptionId option) {
  const double s = w.ego.position.x();
  if (option == OptionId::LaneFollowWait) {
    const int lane = w.ego.lane_id;
    const auto front = front_vehicle(observe(w));
    const SpeedRule wait_rule = front.present && front.ratio <= 1.0
                                    ? SpeedRule{SpeedProfile::Wait, 0.0}
                                    : SpeedRule{SpeedProfile::Follow, cfg.crawl_speed};
    return {Candidate{cfg.lanes.midline(lane, s + cfg.follow_long),
                      {SpeedProfile::Follow, cfg.follow_long_speed}},
            Candidate{cfg.lanes.midline(lane, s + cfg.follow_short),
                      {SpeedProfile::Follow, cfg.follow_short_speed}},
            Candidate{cfg.lanes.midline(lane, s + cfg.wait_distance), wait_rule}};
  }
  const int lane = other_lane(w.ego.lane_id, cfg.lanes);
  return {Candidate{cfg.lanes.midline(lane, s + cfg.change_fast),
                    {SpeedProfile::Fast, cfg.change_fast_speed}},
          Candidate{cfg.lanes.midline(lane, s + cfg.change_normal),
                    {SpeedProfile::Normal, cfg.change_normal_speed}},
          Candidate{cfg.lanes.midline(lane, s + cfg.change_sharp),
                    {SpeedProfile::Sharp, cfg.change_sharp_speed}}};
}

Candidate safety_follow_point(const WorldState& w, const ScenarioConfig& cfg) {
  const auto front = front_vehicle(observe(w));
  double offset = cfg.safety_follow_distance;
  SpeedRule rule{SpeedProfile::Follow, cfg.follow_short_speed};
  if (front.present && front.gap <= cfg.sensing_range) {
    offset = std::max(cfg.safety_min_offset,
                      std::min(cfg.safety_follow_distance, front.gap - cfg.safety_margin));
    if (front.ratio <= 1.0) rule = {SpeedProfile::Wait, 0.0};
  }
  return {cfg.lanes.midline(w.ego.lane_id, w.ego.position.x() + offset), rule};
}

}  // namespace hrlplan::sim
