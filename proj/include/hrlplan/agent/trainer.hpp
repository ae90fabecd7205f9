#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hrlplan/agent/encoding.hpp"
#include "hrlplan/agent/policy.hpp"
#include "hrlplan/agent/replay.hpp"
#include "hrlplan/agent/rollout.hpp"
#include "hrlplan/nn/network.hpp"

namespace hrlplan::agent {

struct AgentConfig {
  nn::Encoder encoder = nn::Encoder::Lstm;
  int encoder_units = 32;
  std::vector<int> hidden{64};
  double gamma = 0.99;
  int batch_size = 32;
  int updates_per_episode = 4;
  int target_sync_episodes = 20;
  std::size_t buffer_capacity = 50000;
  EpsilonSchedule epsilon{};
  double learning_rate = 1e-3;
  double momentum = 0.9;
  double grad_clip = 0.0;
  double reward_scale = 0.01;  // rewards are scaled by this inside the learning targets
  bool option_double_q = true;
  int warm_start_episodes = 100;
  int total_episodes = 2000;
  Normalization norm{};
  RuleParams rules{};
};

struct Losses {
  double option = 0.0;
  double planner = 0.0;
};

/// A trainable macro-action policy.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual Decision act(const sim::HistoryVector& h, double epsilon, std::mt19937_64& rng) const = 0;
  /// One "train with buffer" pass; returns the mean losses.
  virtual Losses learn(const ReplayBuffer& buffer, std::mt19937_64& rng) = 0;
  virtual void sync_targets() = 0;
  virtual void save(std::ostream& os) const = 0;
  virtual void load(std::istream& is) = 0;
  virtual std::size_t gradient_updates() const = 0;
};

/// Options network over 2 options and planner network over 3 choices
/// conditioned on the option one-hot, each with a target copy.
class HierarchicalLearner final : public Learner {
 public:
  HierarchicalLearner(const AgentConfig& cfg, std::uint64_t seed);

  Decision act(const sim::HistoryVector& h, double epsilon, std::mt19937_64& rng) const override;
  Losses learn(const ReplayBuffer& buffer, std::mt19937_64& rng) override;
  void sync_targets() override;
  void save(std::ostream& os) const override;
  void load(std::istream& is) override;
  std::size_t gradient_updates() const override { return updates_; }

  const nn::NetworkParams<double>& options() const { return options_; }
  const nn::NetworkParams<double>& planner() const { return planner_; }
  const nn::NetworkParams<double>& options_target() const { return options_target_; }
  const nn::NetworkParams<double>& planner_target() const { return planner_target_; }

  static nn::Architecture options_architecture(const AgentConfig& cfg);
  static nn::Architecture planner_architecture(const AgentConfig& cfg);

 private:
  AgentConfig cfg_;
  nn::NetworkParams<double> options_, planner_, options_target_, planner_target_;
  nn::SgdMomentum<double> options_opt_, planner_opt_;
  std::size_t updates_ = 0;
};

/// Single network over the 6 flattened (option, choice) actions, fed the
/// latest observation only.
class FlatLearner final : public Learner {
 public:
  static constexpr int kActions = kNumOptions * kNumChoices;

  FlatLearner(const AgentConfig& cfg, std::uint64_t seed);

  Decision act(const sim::HistoryVector& h, double epsilon, std::mt19937_64& rng) const override;
  Losses learn(const ReplayBuffer& buffer, std::mt19937_64& rng) override;
  void sync_targets() override;
  void save(std::ostream& os) const override;
  void load(std::istream& is) override;
  std::size_t gradient_updates() const override { return updates_; }

  const nn::NetworkParams<double>& network() const { return net_; }
  static nn::Architecture architecture(const AgentConfig& cfg);

 private:
  AgentConfig cfg_;
  nn::NetworkParams<double> net_, target_;
  nn::SgdMomentum<double> opt_;
  std::size_t updates_ = 0;
};

/// k <-> (option = k / 3, choice = k % 3).
int flat_index(const Decision& d);
Decision from_flat_index(int k);

struct LearningCurveRow {
  int episode = 0;
  double option_reward = 0.0;
  double planner_reward = 0.0;
  sim::Outcome outcome = sim::Outcome::Timeout;
  double epsilon = 0.0;
  double loss_option = 0.0;
  double loss_planner = 0.0;
};

struct TrainingStats {
  std::vector<LearningCurveRow> curve;
  std::size_t warm_start_transitions = 0;
  std::size_t updates_before_first_policy_episode = 0;
};

/// Called after each episode (1-based count) once its training pass is done.
using EpisodeHook = std::function<void(int episode, const Learner& learner)>;

/// Warm start with the rule policy, then epsilon-greedy episodes with one
/// training pass after each and periodic target syncs.
TrainingStats train(Learner& learner, const AgentConfig& cfg, const RolloutConfig& rollout,
                    std::uint64_t seed, const EpisodeHook& hook = {});

/// Greedy (epsilon = 0) policy wrapper for evaluation.
PolicyFn greedy_policy(const Learner& learner);

}  // namespace hrlplan::agent
