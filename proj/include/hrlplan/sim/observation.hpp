#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace hrlplan::sim {

/// Index of the non-ego vehicles inside an Observation.
enum class Other : int { Obstacle = 0, CarA = 1, CarB = 2 };
inline constexpr int kNumOthers = 3;

inline constexpr double kObstacleSafeDistance = 16.0;
inline constexpr double kMovingSafeDistance = 9.0;
/// Chase distance reported for a vehicle entirely behind the ego.
inline constexpr double kBehindSentinel = 1000.0;

constexpr double safe_threshold(Other f) {
  return f == Other::Obstacle ? kObstacleSafeDistance : kMovingSafeDistance;
}

struct OtherReading {
  double speed = 0.0;
  double chase = kBehindSentinel;  // d_cf
  double ratio = kBehindSentinel;  // d_cfr = d_cf / safe_threshold(f)
  int lane_id = 0;

  friend bool operator==(const OtherReading&, const OtherReading&) = default;
};

/// The 14-scalar state tuple.
struct Observation {
  static constexpr int kSize = 14;

  double ego_speed = 0.0;
  int ego_lane = 0;
  std::array<OtherReading, kNumOthers> others{};

  const OtherReading& operator[](Other f) const { return others[static_cast<int>(f)]; }
  OtherReading& operator[](Other f) { return others[static_cast<int>(f)]; }

  /// [v_e, lane_ide, v_o, d_co, d_cor, lane_ido, v_a, d_ca, d_car, lane_ida,
  ///  v_b, d_cb, d_cbr, lane_idb]
  std::array<double, kSize> to_array() const;
  static Observation from_array(const std::array<double, kSize>& a);

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Fixed-length window of the most recent observations, oldest first.
class HistoryVector {
 public:
  static constexpr int kLength = 3;

  HistoryVector() = default;
  /// Pads by repeating the initial observation.
  explicit HistoryVector(const Observation& initial);

  /// Deque semantics: drops the oldest entry.
  void push(const Observation& obs);
  HistoryVector pushed(const Observation& obs) const;

  const Observation& operator[](int i) const { return steps_[i]; }
  const Observation& latest() const { return steps_[kLength - 1]; }
  const std::array<Observation, kLength>& steps() const { return steps_; }

  friend bool operator==(const HistoryVector&, const HistoryVector&) = default;

 private:
  std::array<Observation, kLength> steps_{};
};

struct NoiseStd {
  double speed = 0.5;     // m/s
  double distance = 8.0;  // m
};

/// Independent zero-mean Gaussian perturbation of speeds and chase distances.
/// Distances are clamped at zero and ratios recomputed from the noised
/// distance; lane ids pass through unchanged.
Observation add_noise(const Observation& obs, const NoiseStd& std_dev, std::mt19937_64& rng);

}  // namespace hrlplan::sim
