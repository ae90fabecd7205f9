#include "hrlplan/sim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hrlplan/sim/types.hpp"

namespace hrlplan {

std::string_view to_string(OptionId o) {
  return o == OptionId::LaneFollowWait ? "lane_follow_wait" : "lane_change";
}

std::string_view choice_label(OptionId o, PlannerChoice p) {
  static constexpr std::array<std::string_view, 3> follow{"long", "short", "wait"};
  static constexpr std::array<std::string_view, 3> change{"fast", "normal", "sharp"};
  return o == OptionId::LaneFollowWait ? follow[index_of(p)] : change[index_of(p)];
}

}  // namespace hrlplan

namespace hrlplan::sim {

int LaneGeometry::nearest_lane(double y) const {
  const int lane = static_cast<int>(std::lround(y / lane_width));
  return std::clamp(lane, 0, lane_count - 1);
}

std::array<Eigen::Vector2d, 4> OrientedBox::corners() const {
  const Eigen::Vector2d fwd(std::cos(heading), std::sin(heading));
  const Eigen::Vector2d left(-fwd.y(), fwd.x());
  const Eigen::Vector2d hl = 0.5 * length * fwd;
  const Eigen::Vector2d hw = 0.5 * width * left;
  return {center + hl + hw, center - hl + hw, center - hl - hw, center + hl - hw};
}

double OrientedBox::half_diagonal() const { return 0.5 * std::hypot(length, width); }

namespace {

// Projection interval of a box onto a unit axis.
std::pair<double, double> project(const OrientedBox& b, const Eigen::Vector2d& axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : b.corners()) {
    const double p = c.dot(axis);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  return {lo, hi};
}

}  // namespace

bool overlaps(const OrientedBox& a, const OrientedBox& b) {
  if ((a.center - b.center).norm() > a.half_diagonal() + b.half_diagonal()) return false;
  const std::array<Eigen::Vector2d, 4> axes{
      Eigen::Vector2d(std::cos(a.heading), std::sin(a.heading)),
      Eigen::Vector2d(-std::sin(a.heading), std::cos(a.heading)),
      Eigen::Vector2d(std::cos(b.heading), std::sin(b.heading)),
      Eigen::Vector2d(-std::sin(b.heading), std::cos(b.heading))};
  for (const auto& axis : axes) {
    const auto [alo, ahi] = project(a, axis);
    const auto [blo, bhi] = project(b, axis);
    if (ahi < blo || bhi < alo) return false;
  }
  return true;
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (a > -std::numbers::pi && a <= std::numbers::pi) return a;
  a = std::fmod(a + std::numbers::pi, two_pi);
  if (a <= 0.0) a += two_pi;
  return a - std::numbers::pi;
}

}  // namespace hrlplan::sim
