#pragma once

#include <vector>

#include "hrlplan/sim/observation.hpp"
#include "hrlplan/sim/types.hpp"

namespace hrlplan::agent {

/// One macro step: decision, summed sub-trajectory rewards, successor.
struct Transition {
  sim::Observation s;
  sim::HistoryVector h;
  OptionId option = OptionId::LaneFollowWait;
  PlannerChoice choice = PlannerChoice::Choice0;
  double r_option = 0.0;
  double r_planner = 0.0;
  sim::Observation s_next;
  sim::HistoryVector h_next;
  bool terminal = false;
  // Episode ended or the next macro step picked a different option.
  bool planner_terminal = false;
  int episode_id = 0;
  int step_index = 0;
};

using Episode = std::vector<Transition>;

}  // namespace hrlplan::agent
