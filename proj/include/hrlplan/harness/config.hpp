#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hrlplan/agent/rollout.hpp"
#include "hrlplan/agent/trainer.hpp"
#include "hrlplan/baselines/methods.hpp"

namespace hrlplan::harness {

using ConfigError = sim::ConfigError;

/// Everything a run depends on. Serializes canonically (keys sorted) so the
/// hash of the text identifies the run.
struct ExperimentConfig {
  baselines::MethodSpec method{};
  sim::NoiseStd noise_std{};
  std::uint64_t seed = 1;
  int eval_episodes = 200;
  bool train_randomize = true;
  bool eval_randomize = false;

  sim::ScenarioConfig scenario{};
  sim::RewardWeights weights{};
  control::ControllerConfig control{};
  control::PrimitiveTable primitives = baselines::default_primitive_table();
  agent::AgentConfig agent{};

  /// Throws ConfigError on inconsistent settings.
  void validate() const;

  /// Rollout settings for training or evaluation.
  agent::RolloutConfig rollout(bool for_training) const;
  agent::AgentConfig agent_config() const;

  /// Sorted `key = value` lines.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
  /// Hash over the keys every method must share (scenario, rewards, control,
  /// noise levels, evaluation seeds); excludes method and noise flag.
  std::string environment_hash() const;
};

/// Applies `key = value` lines on top of `base`. '#' starts a comment.
ExperimentConfig parse_config(std::istream& is, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Sets one key from its textual value; throws ConfigError for unknown keys
/// or malformed values.
void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct KeyDoc {
  std::string key;
  std::string doc;
};
/// All recognized keys with a one-line description.
std::vector<KeyDoc> documented_keys();

/// Canonical text with each key preceded by its description.
std::string annotated(const ExperimentConfig& cfg);

std::string fnv1a_hex(const std::string& text);

}  // namespace hrlplan::harness
