#include "hrlplan/harness/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "hrlplan/nn/serialize.hpp"
#include "hrlplan/sim/rewards.hpp"

namespace hrlplan::harness {

MetricsReport compute_metrics(std::vector<EpisodeRow> rows) {
  MetricsReport m;
  m.episodes = static_cast<int>(rows.size());
  if (rows.empty()) return m;

  double reward = 0.0, jerk_sq = 0.0;
  long long ticks = 0;
  int invaded = 0, collisions = 0, successes = 0, timeouts = 0;
  for (const EpisodeRow& r : rows) {
    const auto& e = r.result;
    reward += e.total_reward();
    if (e.lane_invasions > 0) ++invaded;
    switch (e.outcome) {
      case sim::Outcome::Success: ++successes; break;
      case sim::Outcome::Collision: ++collisions; break;
      case sim::Outcome::Timeout: ++timeouts; break;
    }
    jerk_sq += e.jerk_rms * e.jerk_rms * e.ticks;
    ticks += e.ticks;
  }
  const double n = static_cast<double>(rows.size());
  m.total_average_reward = reward / n;
  m.lane_invasion_rate = 100.0 * invaded / n;
  m.collision_rate = 100.0 * collisions / n;
  m.success_rate = 100.0 * successes / n;
  m.timeout_rate = 100.0 * timeouts / n;
  m.jerk_rms = ticks > 0 ? std::sqrt(jerk_sq / static_cast<double>(ticks)) : 0.0;
  m.rows = std::move(rows);
  return m;
}

void write_episode_csv(std::ostream& os, const MetricsReport& m) {
  using nn::format_double;
  os << "episode,seed,outcome,option_reward,planner_reward,total_reward,lane_invasions,"
        "macro_steps,ticks,jerk_rms\n";
  for (const EpisodeRow& r : m.rows) {
    const auto& e = r.result;
    os << r.episode << ',' << r.seed << ',' << sim::to_string(e.outcome) << ','
       << format_double(e.option_reward_total) << ',' << format_double(e.planner_reward_total)
       << ',' << format_double(e.total_reward()) << ',' << e.lane_invasions << ','
       << e.macro_steps << ',' << e.ticks << ',' << format_double(e.jerk_rms) << '\n';
  }
}

void write_summary(std::ostream& os, const MetricsReport& m) {
  using nn::format_double;
  os << "key,value\n"
     << "episodes," << m.episodes << '\n'
     << "total_average_reward," << format_double(m.total_average_reward) << '\n'
     << "lane_invasion_rate," << format_double(m.lane_invasion_rate) << '\n'
     << "collision_rate," << format_double(m.collision_rate) << '\n'
     << "success_rate," << format_double(m.success_rate) << '\n'
     << "timeout_rate," << format_double(m.timeout_rate) << '\n'
     << "jerk_rms," << format_double(m.jerk_rms) << '\n';
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

}  // namespace hrlplan::harness
