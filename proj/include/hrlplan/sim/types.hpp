#pragma once

#include <array>
#include <string_view>

namespace hrlplan {

/// High-level maneuver selected by the options network.
enum class OptionId : int { LaneFollowWait = 0, LaneChange = 1 };

/// Low-level waypoint choice. Meaning depends on the active option:
/// long/short/wait under LaneFollowWait, fast/normal/sharp under LaneChange.
enum class PlannerChoice : int { Choice0 = 0, Choice1 = 1, Choice2 = 2 };

inline constexpr int kNumOptions = 2;
inline constexpr int kNumChoices = 3;

inline constexpr std::array<OptionId, kNumOptions> kAllOptions{OptionId::LaneFollowWait,
                                                               OptionId::LaneChange};
inline constexpr std::array<PlannerChoice, kNumChoices> kAllChoices{
    PlannerChoice::Choice0, PlannerChoice::Choice1, PlannerChoice::Choice2};

constexpr int index_of(OptionId o) { return static_cast<int>(o); }
constexpr int index_of(PlannerChoice p) { return static_cast<int>(p); }

std::string_view to_string(OptionId o);
std::string_view choice_label(OptionId o, PlannerChoice p);

}  // namespace hrlplan
