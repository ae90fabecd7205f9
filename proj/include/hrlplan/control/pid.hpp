#pragma once

#include <Eigen/Core>

#include "hrlplan/sim/vehicle.hpp"
#include "hrlplan/sim/world.hpp"

namespace hrlplan::control {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double integral_limit = 0.0;  // bound on |ki * integral|
  double out_min = -1.0;
  double out_max = 1.0;
};

inline PidGains default_longitudinal_gains() { return {0.8, 0.1, 0.05, 0.2, -1.0, 1.0}; }
inline PidGains default_lateral_gains() { return {2.0, 0.0, 0.2, 0.2, -1.0, 1.0}; }

/// Textbook PID on a caller-supplied error. The derivative term is zero on the
/// first update after reset so a new setpoint does not kick the output.
class PidController {
 public:
  PidController() = default;
  explicit PidController(const PidGains& gains) : gains_(gains) {}

  double update(double error, double dt);
  void reset();

  const PidGains& gains() const { return gains_; }
  double integral_term() const { return gains_.ki * integral_; }

 private:
  PidGains gains_{};
  double integral_ = 0.0;
  double prev_error_ = 0.0;
  bool primed_ = false;
};

/// Speed reachable at a waypoint `distance` ahead under constant maximum
/// acceleration (speeding up) or deceleration (slowing down), capped at the
/// rule's ceiling. The wait profile always yields zero.
double target_speed(double current_speed, double distance, const sim::SpeedRule& rule,
                    double max_accel, double max_decel);

/// Throttle in [-1, 1] from the speed error (target - current).
double longitudinal_control(PidController& pid, double current_speed, double target,
                            double dt);

/// Steer in [-1, 1] from the signed error between the heading and the bearing
/// to `target` (left positive). Zero for coincident points.
double lateral_control(PidController& pid, const sim::VehicleState& pose,
                       const Eigen::Vector2d& target, double dt);

}  // namespace hrlplan::control
