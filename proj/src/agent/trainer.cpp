#include "hrlplan/agent/trainer.hpp"

#include <istream>
#include <ostream>

#include "hrlplan/agent/targets.hpp"
#include "hrlplan/nn/serialize.hpp"

namespace hrlplan::agent {

namespace {

using nn::Matrix;

std::span<const double> column(const Matrix<double>& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

/// Every non-padded transition of every sampled window.
std::vector<const Transition*> gather(const ReplayBuffer& buffer,
                                      const std::vector<SequenceWindow>& windows) {
  std::vector<const Transition*> items;
  items.reserve(windows.size() * sim::HistoryVector::kLength);
  for (const auto& w : windows) {
    const auto& ep = buffer.episode(w.episode);
    for (std::size_t k = static_cast<std::size_t>(w.padded); k < w.steps.size(); ++k) {
      items.push_back(&ep[w.steps[k]]);
    }
  }
  return items;
}

/// MSE on the taken action; returns the loss and applies one optimizer step.
double regress(nn::NetworkParams<double>& net, nn::SgdMomentum<double>& opt,
               const nn::ForwardTrace<double>& trace, const std::vector<int>& actions,
               const std::vector<double>& targets) {
  const Eigen::Index n = static_cast<Eigen::Index>(actions.size());
  Matrix<double> d_out = Matrix<double>::Zero(net.arch.output_dim, n);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double diff = trace.output(actions[j], j) - targets[j];
    loss += diff * diff;
    d_out(actions[j], j) = 2.0 * diff / static_cast<double>(n);
  }
  const auto grad = nn::backward(net, trace, d_out);
  opt.step(net, grad);
  return loss / static_cast<double>(n);
}

}  // namespace

nn::Architecture HierarchicalLearner::options_architecture(const AgentConfig& cfg) {
  nn::Architecture a;
  a.input_dim = kObservationFeatures;
  a.seq_len = sim::HistoryVector::kLength;
  a.encoder = cfg.encoder;
  a.encoder_units = cfg.encoder_units;
  a.hidden = cfg.hidden;
  a.output_dim = kNumOptions;
  return a;
}

nn::Architecture HierarchicalLearner::planner_architecture(const AgentConfig& cfg) {
  nn::Architecture a = options_architecture(cfg);
  a.input_dim = kGoalFeatures;
  a.output_dim = kNumChoices;
  return a;
}

HierarchicalLearner::HierarchicalLearner(const AgentConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      options_(nn::init_params<double>(options_architecture(cfg), mix_seed(seed, 11))),
      planner_(nn::init_params<double>(planner_architecture(cfg), mix_seed(seed, 12))),
      options_target_(nn::copy_params(options_)),
      planner_target_(nn::copy_params(planner_)),
      options_opt_(cfg.learning_rate, cfg.momentum, cfg.grad_clip),
      planner_opt_(cfg.learning_rate, cfg.momentum, cfg.grad_clip) {}

Decision HierarchicalLearner::act(const sim::HistoryVector& h, double epsilon,
                                  std::mt19937_64& rng) const {
  const OptionId o = select_option(options_, h, epsilon, rng, cfg_.norm);
  const PlannerChoice p = select_planner(planner_, h, o, epsilon, rng, cfg_.norm);
  return {o, p};
}

Losses HierarchicalLearner::learn(const ReplayBuffer& buffer, std::mt19937_64& rng) {
  Losses total;
  if (buffer.empty() || cfg_.updates_per_episode <= 0) return total;
  const int steps = sim::HistoryVector::kLength;
  for (int u = 0; u < cfg_.updates_per_episode; ++u) {
    const auto windows = sample_sequences(buffer, cfg_.batch_size, steps, rng);
    const auto items = gather(buffer, windows);
    const Eigen::Index n = static_cast<Eigen::Index>(items.size());

    Matrix<double> x(options_.arch.flat_input(), n), x_next(options_.arch.flat_input(), n);
    Matrix<double> xg(planner_.arch.flat_input(), n), xg_next(planner_.arch.flat_input(), n);
    std::vector<int> options(n), choices(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Transition& t = *items[j];
      encode_history(t.h, std::nullopt, cfg_.norm, x.col(j));
      encode_history(t.h_next, std::nullopt, cfg_.norm, x_next.col(j));
      encode_history(t.h, t.option, cfg_.norm, xg.col(j));
      encode_history(t.h_next, t.option, cfg_.norm, xg_next.col(j));
      options[j] = index_of(t.option);
      choices[j] = index_of(t.choice);
    }

    {
      const auto trace = nn::forward(options_, x);
      const auto online_next = nn::forward(options_, x_next).output;
      const auto target_next = nn::forward(options_target_, x_next).output;
      std::vector<double> y(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        const double r = items[j]->r_option * cfg_.reward_scale;
        y[j] = option_target({&r, 1}, items[j]->terminal, column(online_next, j),
                             column(target_next, j), cfg_.gamma, cfg_.option_double_q);
      }
      total.option += regress(options_, options_opt_, trace, options, y);
    }
    {
      const auto trace = nn::forward(planner_, xg);
      const auto online_next = nn::forward(planner_, xg_next).output;
      const auto target_next = nn::forward(planner_target_, xg_next).output;
      std::vector<double> y(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        y[j] = agent::planner_target(items[j]->r_planner * cfg_.reward_scale, items[j]->planner_terminal,
                              column(online_next, j), column(target_next, j), cfg_.gamma);
      }
      total.planner += regress(planner_, planner_opt_, trace, choices, y);
    }
    ++updates_;
  }
  total.option /= cfg_.updates_per_episode;
  total.planner /= cfg_.updates_per_episode;
  return total;
}

void HierarchicalLearner::sync_targets() {
  options_target_ = nn::copy_params(options_);
  planner_target_ = nn::copy_params(planner_);
}

void HierarchicalLearner::save(std::ostream& os) const {
  nn::save_network(os, "options", options_);
  nn::save_network(os, "planner", planner_);
}

void HierarchicalLearner::load(std::istream& is) {
  std::string label;
  auto o = nn::load_network(is, label);
  if (label != "options" || !(o.arch == options_.arch))
    throw nn::FormatError("checkpoint: options network does not match the configuration");
  auto p = nn::load_network(is, label);
  if (label != "planner" || !(p.arch == planner_.arch))
    throw nn::FormatError("checkpoint: planner network does not match the configuration");
  options_ = std::move(o);
  planner_ = std::move(p);
  sync_targets();
}

int flat_index(const Decision& d) { return index_of(d.option) * kNumChoices + index_of(d.choice); }

Decision from_flat_index(int k) {
  return {static_cast<OptionId>(k / kNumChoices), static_cast<PlannerChoice>(k % kNumChoices)};
}

nn::Architecture FlatLearner::architecture(const AgentConfig& cfg) {
  nn::Architecture a;
  a.input_dim = kObservationFeatures;
  a.seq_len = 1;
  a.encoder = nn::Encoder::Dense;
  a.encoder_units = cfg.encoder_units;
  a.hidden = cfg.hidden;
  a.output_dim = kActions;
  return a;
}

FlatLearner::FlatLearner(const AgentConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      net_(nn::init_params<double>(architecture(cfg), mix_seed(seed, 21))),
      target_(nn::copy_params(net_)),
      opt_(cfg.learning_rate, cfg.momentum, cfg.grad_clip) {}

Decision FlatLearner::act(const sim::HistoryVector& h, double epsilon,
                          std::mt19937_64& rng) const {
  Eigen::VectorXd x(kObservationFeatures);
  encode_observation(h.latest(), std::nullopt, cfg_.norm, x);
  const Eigen::VectorXd q = nn::predict(net_, x);
  return from_flat_index(
      epsilon_greedy({q.data(), static_cast<std::size_t>(q.size())}, epsilon, rng));
}

Losses FlatLearner::learn(const ReplayBuffer& buffer, std::mt19937_64& rng) {
  Losses total;
  if (buffer.empty() || cfg_.updates_per_episode <= 0) return total;
  for (int u = 0; u < cfg_.updates_per_episode; ++u) {
    const auto windows = sample_sequences(buffer, cfg_.batch_size, sim::HistoryVector::kLength, rng);
    const auto items = gather(buffer, windows);
    const Eigen::Index n = static_cast<Eigen::Index>(items.size());
    Matrix<double> x(kObservationFeatures, n), x_next(kObservationFeatures, n);
    std::vector<int> actions(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      encode_observation(items[j]->s, std::nullopt, cfg_.norm, x.col(j));
      encode_observation(items[j]->s_next, std::nullopt, cfg_.norm, x_next.col(j));
      actions[j] = flat_index({items[j]->option, items[j]->choice});
    }
    const auto trace = nn::forward(net_, x);
    const auto online_next = nn::forward(net_, x_next).output;
    const auto target_next = nn::forward(target_, x_next).output;
    std::vector<double> y(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r = (items[j]->r_option + items[j]->r_planner) * cfg_.reward_scale;
      y[j] = ddqn_target(r, items[j]->terminal, column(online_next, j), column(target_next, j),
                         cfg_.gamma);
    }
    const double loss = regress(net_, opt_, trace, actions, y);
    total.option += loss;
    total.planner += loss;
    ++updates_;
  }
  total.option /= cfg_.updates_per_episode;
  total.planner /= cfg_.updates_per_episode;
  return total;
}

void FlatLearner::sync_targets() { target_ = nn::copy_params(net_); }

void FlatLearner::save(std::ostream& os) const { nn::save_network(os, "flat", net_); }

void FlatLearner::load(std::istream& is) {
  std::string label;
  auto p = nn::load_network(is, label);
  if (label != "flat" || !(p.arch == net_.arch))
    throw nn::FormatError("checkpoint: flat network does not match the configuration");
  net_ = std::move(p);
  sync_targets();
}

TrainingStats train(Learner& learner, const AgentConfig& cfg, const RolloutConfig& rollout,
                    std::uint64_t seed, const EpisodeHook& hook) {
  TrainingStats stats;
  ReplayBuffer buffer(cfg.buffer_capacity);
  std::mt19937_64 learn_rng(mix_seed(seed, 1));
  std::mt19937_64 explore_rng(mix_seed(seed, 2));
  const sim::ScenarioConfig& scenario = rollout.scenario;
  const RuleParams rules = cfg.rules;

  for (int ep = 0; ep < cfg.total_episodes; ++ep) {
    const bool warm = ep < cfg.warm_start_episodes;
    const double eps = warm ? 0.0 : cfg.epsilon.at(ep - cfg.warm_start_episodes);
    if (ep == cfg.warm_start_episodes) {
      stats.updates_before_first_policy_episode = learner.gradient_updates();
    }
    PolicyFn policy;
    if (warm) {
      policy = [&](const sim::HistoryVector&, const sim::Observation& truth) {
        return warm_start_policy(truth, scenario, rules);
      };
    } else {
      policy = [&](const sim::HistoryVector& h, const sim::Observation&) {
        return learner.act(h, eps, explore_rng);
      };
    }
    auto rec = run_episode(rollout, mix_seed(seed, 1000 + static_cast<std::uint64_t>(ep)), policy, ep);
    if (warm) stats.warm_start_transitions += rec.transitions.size();
    buffer.add_episode(std::move(rec.transitions));

    Losses losses;
    if (!warm) {
      losses = learner.learn(buffer, learn_rng);
      const int done = ep - cfg.warm_start_episodes + 1;
      if (cfg.target_sync_episodes > 0 && done % cfg.target_sync_episodes == 0) {
        learner.sync_targets();
      }
    }
    stats.curve.push_back({ep + 1, rec.result.option_reward_total, rec.result.planner_reward_total,
                           rec.result.outcome, eps, losses.option, losses.planner});
    if (hook) hook(ep + 1, learner);
  }
  if (cfg.total_episodes <= cfg.warm_start_episodes) {
    stats.updates_before_first_policy_episode = learner.gradient_updates();
  }
  return stats;
}

PolicyFn greedy_policy(const Learner& learner) {
  return [&learner](const sim::HistoryVector& h, const sim::Observation&) {
    std::mt19937_64 unused(0);
    return learner.act(h, 0.0, unused);
  };
}

}  // namespace hrlplan::agent
