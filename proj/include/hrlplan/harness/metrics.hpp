#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hrlplan/sim/episode.hpp"

namespace hrlplan::harness {

struct EpisodeRow {
  int episode = 0;
  std::uint64_t seed = 0;
  sim::EpisodeResult result;
};

/// Aggregates over evaluation episodes. Rates are percentages of episodes;
/// an episode counts towards the lane invasion rate when it had at least one
/// invasion event.
struct MetricsReport {
  int episodes = 0;
  double total_average_reward = 0.0;
  double lane_invasion_rate = 0.0;
  double collision_rate = 0.0;
  double success_rate = 0.0;
  double timeout_rate = 0.0;
  double jerk_rms = 0.0;  // over all evaluated ticks
  std::vector<EpisodeRow> rows;
};

MetricsReport compute_metrics(std::vector<EpisodeRow> rows);

/// Per-episode table: episode,seed,outcome,option_reward,planner_reward,
/// total_reward,lane_invasions,macro_steps,ticks,jerk_rms
void write_episode_csv(std::ostream& os, const MetricsReport& m);

/// key,value summary of the aggregates.
void write_summary(std::ostream& os, const MetricsReport& m);

/// Fixed-precision decimal used in the human-readable tables.
std::string fixed(double x, int digits);

}  // namespace hrlplan::harness
