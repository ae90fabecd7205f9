#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "hrlplan/sim/geometry.hpp"
#include "hrlplan/sim/observation.hpp"
#include "hrlplan/sim/types.hpp"
#include "hrlplan/sim/vehicle.hpp"

namespace hrlplan::sim {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Scenario layout and waypoint menu parameters. Distances in meters,
/// speeds in m/s.
struct ScenarioConfig {
  LaneGeometry lanes{};
  double goal_x = 150.0;
  int tick_rate = 30;
  int timeout_ticks = 1800;

  double vehicle_length = 4.5;
  double vehicle_width = 2.0;
  VehicleLimits limits{};

  int ego_lane = 0;
  int target_lane = 1;
  double ego_start_x = 0.0;  // footprint center
  double ego_initial_speed = 6.0;

  // Obstacle placement is given as the rear-bumper coordinate.
  double obstacle_rear = 60.0;
  Interval obstacle_rear_range{40.0, 80.0};

  // Car A: rear-bumper gap ahead of the ego front. Car B: gap ahead of car A's front.
  double car_a_gap = 20.0;
  Interval car_a_gap_range{10.0, 30.0};
  double car_b_gap = 22.0;
  Interval car_b_gap_range{12.0, 35.0};
  double car_a_speed = 6.0;
  double car_b_speed = 6.0;
  Interval target_speed_range{4.0, 8.0};

  // Waypoint menu offsets ahead of the ego center.
  double follow_long = 20.0;
  double follow_short = 10.0;
  double wait_distance = 4.0;
  double change_fast = 25.0;
  double change_normal = 15.0;
  double change_sharp = 8.0;

  // Speed ceilings per candidate.
  double follow_long_speed = 10.0;
  double follow_short_speed = 6.0;
  double crawl_speed = 2.0;
  double change_fast_speed = 10.0;
  double change_normal_speed = 7.0;
  double change_sharp_speed = 4.0;

  // Ego speed bands that call for the fast / sharp lane-change profile.
  double fast_band_speed = 7.5;
  double sharp_band_speed = 4.5;

  // Safety follow point after a lane change.
  double safety_follow_distance = 12.0;
  double safety_margin = 4.0;
  double safety_min_offset = 2.0;
  double sensing_range = 60.0;

  double dt() const { return 1.0 / tick_rate; }
  double ego_start_front() const { return ego_start_x + 0.5 * vehicle_length; }

  /// Throws ConfigError on an inconsistent layout.
  void validate() const;
};

enum class SpeedProfile { Follow, Wait, Fast, Normal, Sharp };

struct SpeedRule {
  SpeedProfile profile = SpeedProfile::Follow;
  double ceiling = 0.0;
};

struct Candidate {
  Eigen::Vector2d waypoint = Eigen::Vector2d::Zero();
  SpeedRule speed{};
};

struct WorldState {
  VehicleState ego{};
  std::array<VehicleState, kNumOthers> others{};
  int tick = 0;
  double ego_accel = 0.0;  // realized longitudinal acceleration of the last tick
  OptionId active_option = OptionId::LaneFollowWait;

  const VehicleState& other(Other f) const { return others[static_cast<int>(f)]; }
  VehicleState& other(Other f) { return others[static_cast<int>(f)]; }
};

struct Events {
  bool collision = false;
  bool lane_invasion = false;
  bool success = false;
  bool timeout = false;

  bool terminal() const { return collision || success || timeout; }
};

/// Places the ego, the parked obstacle and the two target-lane cars. With
/// `randomize` set the obstacle position, the target-lane gaps and speeds are
/// drawn uniformly from their configured ranges using `seed`.
WorldState reset(const ScenarioConfig& cfg, std::uint64_t seed, bool randomize);

/// Advances the ego by the kinematic bicycle model and every other car along
/// its lane at constant speed.
void step_physics(WorldState& w, const ScenarioConfig& cfg, double throttle, double steer,
                  double dt);

/// Chase distance from the ego front to the rear of `f`. Zero while the two
/// overlap longitudinally, kBehindSentinel once `f` is entirely behind.
double chase_distance(const VehicleState& ego, const VehicleState& f);

Observation observe(const WorldState& w);

/// Nearest vehicle ahead in the ego's current lane, if any is closer than the
/// sentinel. Returns its index and chase distance.
struct FrontVehicle {
  bool present = false;
  Other which = Other::Obstacle;
  double gap = kBehindSentinel;
  double ratio = kBehindSentinel;
};
FrontVehicle front_vehicle(const Observation& obs);

Events detect_events(const WorldState& w, const ScenarioConfig& cfg);

/// True when any footprint corner of the ego lies outside its current lane.
bool outside_lane(const VehicleState& ego, const LaneGeometry& lanes);

/// Three candidates for the option, ordered Choice0..Choice2.
std::array<Candidate, kNumChoices> waypoint_menu(const WorldState& w, const ScenarioConfig& cfg,
                                                 OptionId option);

/// Lane the LaneChange option heads for: the lane adjacent to the ego's.
int other_lane(int lane_id, const LaneGeometry& lanes);

/// Reorientation point ahead of the ego on its (new) lane midline.
Candidate safety_follow_point(const WorldState& w, const ScenarioConfig& cfg);

}  // namespace hrlplan::sim
