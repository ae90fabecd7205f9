#pragma once

// Checkpoint file layout:
//
//   hrlplan-checkpoint 1
//   method <name>
//   config_hash <16 hex digits>
//   kind networks|rule-based
//   <network sections, see nn/serialize.hpp; absent for rule-based>
//
// Learning curve CSV: episode,option_reward,planner_reward,outcome,epsilon,loss_o,loss_p
// Trace CSV: tick,x,y,heading,speed,option,planner_choice,throttle,steer,r_option,r_planner,event

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hrlplan/agent/trainer.hpp"
#include "hrlplan/harness/config.hpp"
#include "hrlplan/harness/metrics.hpp"

namespace hrlplan::harness {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainingRun {
  std::unique_ptr<agent::Learner> learner;  // null for the rule-based method
  agent::TrainingStats stats;
};

/// Trains the configured method in memory. The hook is not called for the
/// rule-based method.
TrainingRun train_method(const ExperimentConfig& cfg, const agent::EpisodeHook& hook = {});

/// Greedy policy for a learned method, or the slot rules when `learner` is null.
agent::PolicyFn make_policy(const ExperimentConfig& cfg, const agent::Learner* learner);

/// Greedy rollouts over the seed list cfg.seed + [0, episodes).
MetricsReport evaluate(const ExperimentConfig& cfg, const agent::PolicyFn& policy, int episodes);

void write_checkpoint(std::ostream& os, const ExperimentConfig& cfg,
                      const agent::Learner* learner);
/// Throws CheckpointError when the stored method differs from cfg's.
std::unique_ptr<agent::Learner> read_checkpoint(std::istream& is, const ExperimentConfig& cfg);

void write_learning_curve(std::ostream& os, const std::vector<agent::LearningCurveRow>& curve);

/// Writes checkpoint.txt, curve.csv and config.cfg (canonical, with its hash)
/// into `out_dir`.
TrainingRun run_training(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Loads the checkpoint and evaluates it. With a non-empty `out_dir` writes
/// episodes.csv and summary.csv there.
MetricsReport run_evaluation(const std::filesystem::path& checkpoint, const ExperimentConfig& cfg,
                             int episodes, const std::filesystem::path& out_dir = {});

struct ComparisonRow {
  baselines::MethodSpec spec;
  std::string config_hash;
  std::string environment_hash;
  MetricsReport metrics;
};

/// Trains and evaluates every config in order.
std::vector<ComparisonRow> run_comparison(const std::vector<ExperimentConfig>& configs);

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);
void write_comparison_text(std::ostream& os, const std::vector<ComparisonRow>& rows);

/// Writes comparison.csv and comparison.txt into `out_dir`.
std::vector<ComparisonRow> run_comparison(const std::vector<ExperimentConfig>& configs,
                                          const std::filesystem::path& out_dir);

/// One evaluation-mode episode from `seed` with every tick recorded.
void export_trace(std::ostream& os, const ExperimentConfig& cfg, const agent::PolicyFn& policy,
                  std::uint64_t seed);
void export_trace(const std::filesystem::path& checkpoint, const ExperimentConfig& cfg,
                  std::uint64_t seed, std::ostream& os);

}  // namespace hrlplan::harness
