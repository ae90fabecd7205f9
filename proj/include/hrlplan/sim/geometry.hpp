#pragma once

#include <array>

#include <Eigen/Core>

namespace hrlplan::sim {

/// Straight, parallel lanes running along +x. Lane 0 is centered on y = 0,
/// lane k on y = k * lane_width (left of lane 0).
struct LaneGeometry {
  double lane_width = 3.5;
  int lane_count = 2;
  double lane_length = 200.0;

  double center_y(int lane_id) const { return lane_id * lane_width; }
  Eigen::Vector2d midline(int lane_id, double s) const { return {s, center_y(lane_id)}; }

  /// Lane whose midline is closest to lateral coordinate y, clamped to the road.
  int nearest_lane(double y) const;
  double left_boundary(int lane_id) const { return center_y(lane_id) + 0.5 * lane_width; }
  double right_boundary(int lane_id) const { return center_y(lane_id) - 0.5 * lane_width; }
};

struct OrientedBox {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double heading = 0.0;
  double length = 0.0;
  double width = 0.0;

  /// Counter-clockwise from front-left.
  std::array<Eigen::Vector2d, 4> corners() const;
  double half_diagonal() const;
};

/// Separating-axis test. Touching edges count as overlap.
bool overlaps(const OrientedBox& a, const OrientedBox& b);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace hrlplan::sim
