#pragma once

#include <string_view>

namespace hrlplan::sim {

enum class Outcome { Success, Collision, Timeout };

std::string_view to_string(Outcome o);

struct EpisodeResult {
  Outcome outcome = Outcome::Timeout;
  double option_reward_total = 0.0;
  double planner_reward_total = 0.0;
  int lane_invasions = 0;
  int macro_steps = 0;
  int ticks = 0;
  double jerk_rms = 0.0;  // m/s^3

  double total_reward() const { return option_reward_total + planner_reward_total; }
};

}  // namespace hrlplan::sim
