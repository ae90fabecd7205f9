#pragma once

#include <optional>

#include <Eigen/Core>

#include "hrlplan/sim/observation.hpp"
#include "hrlplan/sim/types.hpp"

namespace hrlplan::agent {

/// Feature scaling applied before the networks. Scaled distances and ratios
/// saturate at `cap` so the behind-sentinel reads as "far" without blowing
/// up the inputs.
struct Normalization {
  double speed = 20.0;
  double distance = 100.0;
  double ratio = 5.0;
  double cap = 1.5;
};

inline constexpr int kObservationFeatures = sim::Observation::kSize;
inline constexpr int kGoalFeatures = kObservationFeatures + kNumOptions;

/// Writes the scaled observation (and the option one-hot when `goal` is set)
/// into `out`, which must hold 14 (16) rows.
void encode_observation(const sim::Observation& obs, std::optional<OptionId> goal,
                        const Normalization& norm, Eigen::Ref<Eigen::VectorXd> out);

/// Stacks all history steps, oldest first: 3*14 rows, or 3*16 with a goal.
void encode_history(const sim::HistoryVector& h, std::optional<OptionId> goal,
                    const Normalization& norm, Eigen::Ref<Eigen::VectorXd> out);

Eigen::VectorXd encode_history(const sim::HistoryVector& h, std::optional<OptionId> goal,
                               const Normalization& norm = {});

}  // namespace hrlplan::agent
