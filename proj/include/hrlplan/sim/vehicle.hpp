#pragma once

#include <Eigen/Core>

#include "hrlplan/sim/geometry.hpp"

namespace hrlplan::sim {

struct VehicleState {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();  // footprint center
  double heading = 0.0;
  double speed = 0.0;  // >= 0
  double length = 4.5;
  double width = 2.0;
  int lane_id = 0;

  OrientedBox footprint() const { return {position, heading, length, width}; }
  double front_s() const { return position.x() + 0.5 * length; }
  double rear_s() const { return position.x() - 0.5 * length; }
};

struct VehicleLimits {
  double wheelbase = 2.8;
  double max_accel = 3.0;   // m/s^2 at full throttle
  double max_decel = 6.0;   // m/s^2 at full brake
  double max_steer = 0.6108652381980153;  // 35 degrees
};

/// One explicit-Euler step of the kinematic bicycle model. Controls are
/// clamped to [-1, 1]; negative throttle brakes. Returns the realized
/// longitudinal acceleration (after the speed >= 0 clamp).
double step_bicycle(VehicleState& v, double throttle, double steer, double dt,
                    const VehicleLimits& limits);

/// Turning radius at a normalized steer command, inf for zero steer.
double turning_radius(double steer, const VehicleLimits& limits);

}  // namespace hrlplan::sim
