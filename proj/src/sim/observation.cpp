#include "hrlplan/sim/observation.hpp"

#include <algorithm>

#include "hrlplan/sim/vehicle.hpp"

namespace hrlplan::sim {

std::array<double, Observation::kSize> Observation::to_array() const {
  std::array<double, kSize> a{};
  a[0] = ego_speed;
  a[1] = ego_lane;
  for (int f = 0; f < kNumOthers; ++f) {
    a[2 + 4 * f] = others[f].speed;
    a[3 + 4 * f] = others[f].chase;
    a[4 + 4 * f] = others[f].ratio;
    a[5 + 4 * f] = others[f].lane_id;
  }
  return a;
}

Observation Observation::from_array(const std::array<double, kSize>& a) {
  Observation o;
  o.ego_speed = a[0];
  o.ego_lane = static_cast<int>(a[1]);
  for (int f = 0; f < kNumOthers; ++f) {
    o.others[f].speed = a[2 + 4 * f];
    o.others[f].chase = a[3 + 4 * f];
    o.others[f].ratio = a[4 + 4 * f];
    o.others[f].lane_id = static_cast<int>(a[5 + 4 * f]);
  }
  return o;
}

HistoryVector::HistoryVector(const Observation& initial) { steps_.fill(initial); }

void HistoryVector::push(const Observation& obs) {
  std::shift_left(steps_.begin(), steps_.end(), 1);
  steps_.back() = obs;
}

HistoryVector HistoryVector::pushed(const Observation& obs) const {
  HistoryVector h = *this;
  h.push(obs);
  return h;
}

Observation add_noise(const Observation& obs, const NoiseStd& std_dev, std::mt19937_64& rng) {
  Observation out = obs;
  // Draws are taken unconditionally so the stream advances identically for any std.
  std::normal_distribution<double> unit(0.0, 1.0);
  out.ego_speed += std_dev.speed * unit(rng);
  for (int f = 0; f < kNumOthers; ++f) {
    auto& r = out.others[f];
    r.speed += std_dev.speed * unit(rng);
    r.chase = std::max(0.0, r.chase + std_dev.distance * unit(rng));
    r.ratio = r.chase / safe_threshold(static_cast<Other>(f));
  }
  return out;
}

}  // namespace hrlplan::sim
