#pragma once

#include <array>

#include "hrlplan/control/executor.hpp"

namespace hrlplan::control {

/// Open-loop actuation held for one burst. With `banked` set the steer is
/// +steer toward the destination lane for the first half of the burst and
/// -steer for the second half; otherwise it is held constant.
struct Primitive {
  double throttle = 0.0;
  double steer = 0.0;
  bool banked = false;
};

struct PrimitiveTable {
  std::array<std::array<Primitive, kNumChoices>, kNumOptions> entries{};
  int burst_ticks = 30;

  const Primitive& at(OptionId o, PlannerChoice p) const {
    return entries[index_of(o)][index_of(p)];
  }
};

/// Applies `primitive` for `table.burst_ticks` ticks (or until a terminal
/// event). `steer_sign` is +1 when the destination lane lies to the left.
SubTrajectoryOutcome execute_primitive(sim::WorldState& w, const sim::ScenarioConfig& cfg,
                                       const sim::RewardWeights& weights,
                                       const Primitive& primitive, double steer_sign,
                                       int burst_ticks, MacroContext& ctx,
                                       EpisodeTracker& tracker);

}  // namespace hrlplan::control
