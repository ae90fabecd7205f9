#include "hrlplan/control/pid.hpp"

#include <algorithm>
#include <cmath>

namespace hrlplan::control {

double PidController::update(double error, double dt) {
  const double derivative = primed_ ? (error - prev_error_) / dt : 0.0;
  prev_error_ = error;
  primed_ = true;
  const double pd = gains_.kp * error + gains_.kd * derivative;
  // Conditional integration: hold the integral while the output is pinned
  // against a limit in the direction the error pushes.
  const double trial = pd + gains_.ki * (integral_ + error * dt);
  const bool pinned = (trial > gains_.out_max && error > 0.0) ||
                      (trial < gains_.out_min && error < 0.0);
  if (!pinned) integral_ += error * dt;
  if (gains_.ki > 0.0) {
    const double bound = gains_.integral_limit / gains_.ki;
    integral_ = std::clamp(integral_, -bound, bound);
  }
  const double out = pd + gains_.ki * integral_;
  return std::clamp(out, gains_.out_min, gains_.out_max);
}

void PidController::reset() {
  integral_ = 0.0;
  prev_error_ = 0.0;
  primed_ = false;
}

double target_speed(double current_speed, double distance, const sim::SpeedRule& rule,
                    double max_accel, double max_decel) {
  if (rule.profile == sim::SpeedProfile::Wait) return 0.0;
  const double u = std::max(0.0, current_speed);
  const double d = std::max(0.0, distance);
  if (u <= rule.ceiling) return std::min(rule.ceiling, std::sqrt(u * u + 2.0 * max_accel * d));
  return std::max(rule.ceiling, std::sqrt(std::max(0.0, u * u - 2.0 * max_decel * d)));
}

double longitudinal_control(PidController& pid, double current_speed, double target,
                            double dt) {
  return pid.update(target - current_speed, dt);
}

double lateral_control(PidController& pid, const sim::VehicleState& pose,
                       const Eigen::Vector2d& target, double dt) {
  const Eigen::Vector2d delta = target - pose.position;
  if (delta.norm() < 1e-9) return 0.0;
  const double bearing = std::atan2(delta.y(), delta.x());
  return pid.update(sim::wrap_angle(bearing - pose.heading), dt);
}

}  // namespace hrlplan::control
