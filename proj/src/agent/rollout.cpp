#include "hrlplan/agent/rollout.hpp"

#include <cmath>

#include "hrlplan/control/pid.hpp"

namespace hrlplan::agent {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a combined key
  std::uint64_t z = a * 0x9E3779B97F4A7C15ULL + b + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

control::SubTrajectoryOutcome track(sim::WorldState& w, const RolloutConfig& cfg,
                                    const sim::Candidate& c, control::MacroContext& ctx,
                                    control::EpisodeTracker& tracker) {
  const auto& limits = cfg.scenario.limits;
  const double distance = (c.waypoint - w.ego.position).norm();
  const double v = control::target_speed(w.ego.speed, distance, c.speed, limits.max_accel,
                                         limits.max_decel);
  return control::execute_subtrajectory(w, cfg.scenario, cfg.weights, c.waypoint, v, cfg.control,
                                         cfg.control.subtrajectory_budget, ctx, tracker);
}

}  // namespace

control::SubTrajectoryOutcome execute_decision(sim::WorldState& w, const RolloutConfig& cfg,
                                               const Decision& d,
                                               control::EpisodeTracker& tracker) {
  control::MacroContext ctx{d.option, d.choice, true};
  if (cfg.actuation == Actuation::Direct) {
    const int dest = sim::other_lane(w.ego.lane_id, cfg.scenario.lanes);
    const double sign = dest > w.ego.lane_id ? 1.0 : -1.0;
    return control::execute_primitive(w, cfg.scenario, cfg.weights,
                                      cfg.primitives.at(d.option, d.choice), sign,
                                      cfg.primitives.burst_ticks, ctx, tracker);
  }

  const auto menu = sim::waypoint_menu(w, cfg.scenario, d.option);
  auto out = track(w, cfg, menu[index_of(d.choice)], ctx, tracker);
  if (d.option == OptionId::LaneChange && !out.terminal_event && out.reached) {
    append(out, track(w, cfg, sim::safety_follow_point(w, cfg.scenario), ctx, tracker));
  }
  return out;
}

EpisodeRecord run_episode(const RolloutConfig& cfg, std::uint64_t seed, const PolicyFn& policy,
                          int episode_id, bool keep_trace) {
  EpisodeRecord rec;
  sim::WorldState w = sim::reset(cfg.scenario, seed, cfg.randomize);
  std::mt19937_64 noise_rng(mix_seed(seed, 0x6E6F697365ULL));
  auto sense = [&](const sim::Observation& truth) {
    return cfg.noise ? sim::add_noise(truth, cfg.noise_std, noise_rng) : truth;
  };

  sim::Observation truth = sim::observe(w);
  sim::Observation obs = sense(truth);
  sim::HistoryVector h(obs);
  control::EpisodeTracker tracker;
  double jerk_sq = 0.0;

  for (int step = 0;; ++step) {
    const Decision d = policy(h, truth);
    if (!rec.transitions.empty()) {
      auto& prev = rec.transitions.back();
      prev.planner_terminal = prev.terminal || prev.option != d.option;
    }
    auto out = execute_decision(w, cfg, d, tracker);

    const sim::Observation truth_next = sim::observe(w);
    const sim::Observation obs_next = sense(truth_next);
    Transition t;
    t.s = obs;
    t.h = h;
    t.option = d.option;
    t.choice = d.choice;
    t.r_option = out.r_option;
    t.r_planner = out.r_planner;
    t.s_next = obs_next;
    t.h_next = h.pushed(obs_next);
    t.terminal = out.terminal_event.has_value();
    t.planner_terminal = t.terminal;
    t.episode_id = episode_id;
    t.step_index = step;

    auto& res = rec.result;
    res.option_reward_total += out.r_option;
    res.planner_reward_total += out.r_planner;
    res.lane_invasions += out.lane_invasions;
    res.macro_steps += 1;
    res.ticks += out.ticks_used;
    for (const auto& s : out.trace) jerk_sq += s.jerk * s.jerk;
    if (keep_trace) {
      for (const auto& s : out.trace) rec.trace.push_back({s, d.option, d.choice});
    }

    const bool terminal = t.terminal;
    h = t.h_next;
    obs = obs_next;
    truth = truth_next;
    rec.transitions.push_back(std::move(t));

    if (terminal) {
      switch (*out.terminal_event) {
        case control::TerminalEvent::Collision:
          res.outcome = sim::Outcome::Collision;
          break;
        case control::TerminalEvent::Success:
          res.outcome = sim::Outcome::Success;
          break;
        case control::TerminalEvent::Timeout:
          res.outcome = sim::Outcome::Timeout;
          break;
      }
      break;
    }
  }
  rec.result.jerk_rms = rec.result.ticks > 0 ? std::sqrt(jerk_sq / rec.result.ticks) : 0.0;
  return rec;
}

}  // namespace hrlplan::agent
