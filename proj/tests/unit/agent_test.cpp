#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "hrlplan/agent/encoding.hpp"
#include "hrlplan/agent/policy.hpp"
#include "hrlplan/agent/replay.hpp"
#include "hrlplan/agent/targets.hpp"
#include "hrlplan/agent/trainer.hpp"
#include "hrlplan/sim/rewards.hpp"
#include "hrlplan/sim/world.hpp"
#include "oracles.hpp"

using namespace hrlplan;
using namespace hrlplan::agent;

namespace {

std::vector<double> random_values(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d(0.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

Episode make_episode(int id, int length) {
  Episode e(length);
  for (int i = 0; i < length; ++i) {
    e[i].episode_id = id;
    e[i].step_index = i;
  }
  return e;
}

/// Network whose output is its bias regardless of input.
nn::NetworkParams<double> constant_net(int input_dim, const std::vector<double>& q) {
  nn::Architecture a;
  a.input_dim = input_dim;
  a.encoder_units = 4;
  a.hidden = {4};
  a.output_dim = static_cast<int>(q.size());
  auto p = nn::init_params<double>(a, 1);
  for (auto& b : p.blocks) b.setZero();
  for (std::size_t i = 0; i < q.size(); ++i) p.blocks.back()(i, 0) = q[i];
  return p;
}

sim::Observation clear_road(double speed) {
  sim::Observation o;
  o.ego_speed = speed;
  o.ego_lane = 0;
  return o;
}

void place(sim::Observation& o, sim::Other f, int lane, double chase, double speed = 0.0) {
  o[f].lane_id = lane;
  o[f].chase = chase;
  o[f].ratio = chase / sim::safe_threshold(f);
  o[f].speed = speed;
}

}  // namespace

TEST_CASE("double-Q targets") {
  const std::vector<double> on{1.0, 2.0}, tg{0.5, 0.3};
  CHECK(ddqn_target(1.0, false, on, tg, 0.9) == doctest::Approx(1.27));
  CHECK(ddqn_target(1.0, true, on, tg, 0.9) == 1.0);
  CHECK_THROWS(ddqn_target(1.0, false, on, std::vector<double>{1.0}, 0.9));

  SUBCASE("agrees with the longhand oracle and the shared-network reduction") {
    std::mt19937_64 rng(17);
    std::bernoulli_distribution term(0.2);
    std::uniform_int_distribution<int> width(1, 6);
    std::uniform_real_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
      const int n = width(rng);
      const auto a = random_values(rng, n), b = random_values(rng, n);
      const double r = random_values(rng, 1)[0], gamma = g(rng);
      const bool t = term(rng);
      REQUIRE(ddqn_target(r, t, a, b, gamma) == oracle::ddqn_reference(r, t, a, b, gamma));
      REQUIRE(ddqn_target(r, t, a, a, gamma) == max_target(r, t, a, gamma));
    }
  }
}

TEST_CASE("argmax ties resolve to the lowest index") {
  CHECK(argmax(std::vector<double>{0.7, 0.7}) == 0);
  CHECK(argmax(std::vector<double>{0.1, 0.9, 0.9}) == 1);
  CHECK(argmax(std::vector<double>{-1.0}) == 0);
  CHECK_THROWS(argmax(std::vector<double>{}));
}

TEST_CASE("option and planner targets") {
  const std::vector<double> on{0.0, 1.0}, tg{3.0, 5.0};
  CHECK(option_target(std::vector<double>{-0.1, -0.1, 100.0}, true, on, tg, 0.99) ==
        doctest::Approx(99.8));
  CHECK(option_target(std::vector<double>{0.0, 0.0, 0.0}, false, on, tg, 0.9) ==
        doctest::Approx(0.9 * 5.0));
  CHECK(option_target(std::vector<double>{0.4}, false, on, tg, 0.9) ==
        ddqn_target(0.4, false, on, tg, 0.9));
  CHECK(option_target(std::vector<double>{0.4}, false, std::vector<double>{9.0, 0.0}, tg, 0.9,
                      false) == doctest::Approx(0.4 + 0.9 * 5.0));

  const std::vector<double> pon{3.0, 1.0, 2.0}, ptg{2.0, 1.0, 0.0};
  CHECK(planner_target(1.0, true, pon, ptg, 0.5) == 1.0);
  CHECK(planner_target(1.0, false, pon, ptg, 0.5) == doctest::Approx(2.0));
  CHECK(planner_target(1.0, false, pon, ptg, 0.0) == 1.0);

  SUBCASE("targets are bounded by the rewards and bootstrap magnitude") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> len(1, 40);
    for (int i = 0; i < 2000; ++i) {
      const auto rewards = random_values(rng, len(rng));
      const auto a = random_values(rng, 2), b = random_values(rng, 2);
      double rmax = 0.0, qmax = 0.0;
      for (double r : rewards) rmax = std::max(rmax, std::abs(r));
      for (double q : b) qmax = std::max(qmax, std::abs(q));
      const double t = option_target(rewards, false, a, b, 0.99);
      CHECK(std::abs(t) <= rmax * rewards.size() + 0.99 * qmax + 1e-12);
    }
  }
}

TEST_CASE("double-Q estimator bias on an equal-armed bandit") {
  // Both arms pay N(0, 1); the true maximum value is 0.
  std::mt19937_64 rng(99);
  std::normal_distribution<double> pay(0.0, 1.0);
  const int trials = 10000, pulls = 10;
  double single = 0.0, twin = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> a(2, 0.0), b(2, 0.0), all(2, 0.0);
    for (int arm = 0; arm < 2; ++arm) {
      for (int k = 0; k < pulls; ++k) {
        const double x = pay(rng);
        (k % 2 == 0 ? a : b)[arm] += x / (pulls / 2);
        all[arm] += x / pulls;
      }
    }
    single += max_target(0.0, false, all, 1.0);
    twin += ddqn_target(0.0, false, a, b, 1.0);
  }
  single /= trials;
  twin /= trials;
  // E[max of two N(0, 1/10)] = 1/sqrt(10 pi) ~ 0.178; the split estimate is unbiased.
  CHECK(single > 0.15);
  CHECK(std::abs(twin) < 0.03);
  CHECK(twin <= single);
}

TEST_CASE("epsilon-greedy selection") {
  std::mt19937_64 rng(5);
  const std::vector<double> q{1.0, 2.0};

  SUBCASE("greedy") {
    for (int i = 0; i < 100; ++i) CHECK(epsilon_greedy(q, 0.0, rng) == 1);
    CHECK(epsilon_greedy(std::vector<double>{0.7, 0.7}, 0.0, rng) == 0);
  }
  SUBCASE("two actions explored uniformly") {
    int ones = 0;
    for (int i = 0; i < 10000; ++i) ones += epsilon_greedy(q, 1.0, rng);
    CHECK(std::abs(ones / 10000.0 - 0.5) <= 0.02);
  }
  SUBCASE("three actions explored uniformly") {
    std::array<int, 3> counts{};
    for (int i = 0; i < 10000; ++i) ++counts[epsilon_greedy(std::vector<double>{0.1, 0.9, 0.3}, 1.0, rng)];
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - 10000 / 3.0) * (c - 10000 / 3.0) / (10000 / 3.0);
    CHECK(chi2 < 13.82);  // 99.9% quantile, 2 degrees of freedom
  }
  SUBCASE("schedule") {
    const EpsilonSchedule s{1.0, 0.05, 1500};
    CHECK(s.at(0) == 1.0);
    CHECK(s.at(750) == doctest::Approx(0.525));
    CHECK(s.at(1500) == 0.05);
    CHECK(s.at(9000) == 0.05);
  }
}

TEST_CASE("network-backed selection") {
  std::mt19937_64 rng(1);
  const sim::HistoryVector h(clear_road(5.0));
  CHECK(select_option(constant_net(kObservationFeatures, {1.0, 2.0}), h, 0.0, rng) ==
        OptionId::LaneChange);
  CHECK(select_option(constant_net(kObservationFeatures, {0.7, 0.7}), h, 0.0, rng) ==
        OptionId::LaneFollowWait);
  CHECK(select_planner(constant_net(kGoalFeatures, {0.1, 0.9, 0.3}), h, OptionId::LaneChange, 0.0,
                       rng) == PlannerChoice::Choice1);

  std::map<OptionId, int> seen;
  for (int i = 0; i < 10000; ++i)
    ++seen[select_option(constant_net(kObservationFeatures, {1.0, 2.0}), h, 1.0, rng)];
  CHECK(std::abs(seen[OptionId::LaneChange] / 10000.0 - 0.5) <= 0.02);
}

TEST_CASE("goal encoding") {
  sim::Observation a = clear_road(6.0), b = clear_road(7.0), c = clear_road(8.0);
  place(a, sim::Other::Obstacle, 0, 40.0);
  place(c, sim::Other::CarA, 1, 12.0, 5.0);
  sim::HistoryVector h(a);
  h.push(b);
  h.push(c);
  const Eigen::VectorXd lfw = encode_history(h, OptionId::LaneFollowWait);
  const Eigen::VectorXd lc = encode_history(h, OptionId::LaneChange);
  REQUIRE(lfw.size() == 3 * kGoalFeatures);
  std::set<int> diff;
  for (int i = 0; i < lfw.size(); ++i)
    if (lfw[i] != lc[i]) diff.insert(i);
  std::set<int> expected;
  for (int t = 0; t < 3; ++t) {
    expected.insert(t * kGoalFeatures + kObservationFeatures);
    expected.insert(t * kGoalFeatures + kObservationFeatures + 1);
  }
  CHECK(diff == expected);
  CHECK(encode_history(h, std::nullopt).size() == 3 * kObservationFeatures);
  // Oldest first, speeds scaled.
  CHECK(lfw[0] == doctest::Approx(6.0 / 20.0));
  CHECK(lfw[2 * kGoalFeatures] == doctest::Approx(8.0 / 20.0));
  // The behind sentinel saturates.
  CHECK(lfw[2 * kGoalFeatures + 3] == Normalization{}.cap);
}

TEST_CASE("replay buffer") {
  std::mt19937_64 rng(8);

  SUBCASE("single episode of five") {
    ReplayBuffer buf(100);
    buf.add_episode(make_episode(0, 5));
    std::set<std::size_t> ends;
    for (const auto& w : sample_sequences(buf, 2000, 3, rng)) {
      REQUIRE(w.steps.size() == 3);
      const std::size_t end = w.steps.back();
      ends.insert(end);
      for (int k = 0; k < 3; ++k) {
        const std::size_t want = end >= static_cast<std::size_t>(2 - k) ? end - (2 - k) : 0;
        REQUIRE(w.steps[k] == want);
      }
      CHECK(w.padded == static_cast<int>(end >= 2 ? 0 : 2 - end));
    }
    CHECK(ends == std::set<std::size_t>{0, 1, 2, 3, 4});
  }
  SUBCASE("single transition is padded") {
    ReplayBuffer buf(100);
    buf.add_episode(make_episode(0, 1));
    const auto w = sample_sequences(buf, 1, 3, rng).front();
    CHECK(w.steps == std::vector<std::size_t>{0, 0, 0});
    CHECK(w.padded == 2);
  }
  SUBCASE("episodes are chosen uniformly") {
    ReplayBuffer buf(100);
    buf.add_episode(make_episode(0, 7));
    buf.add_episode(make_episode(1, 7));
    int first = 0;
    for (const auto& w : sample_sequences(buf, 10000, 3, rng)) first += w.episode == 0;
    CHECK(std::abs(first / 10000.0 - 0.5) <= 0.02);
  }
  SUBCASE("windows stay inside one episode") {
    std::uniform_int_distribution<int> len(1, 30);
    for (int trial = 0; trial < 50; ++trial) {
      ReplayBuffer buf(200);
      for (int e = 0; e < 12; ++e) buf.add_episode(make_episode(trial * 100 + e, len(rng)));
      for (const auto& w : sample_sequences(buf, 200, 3, rng)) {
        const Episode& ep = buf.episode(w.episode);
        for (std::size_t k = 0; k < 3; ++k) {
          REQUIRE(w.steps[k] < ep.size());
          if (k > 0 && static_cast<int>(k) > w.padded) REQUIRE(w.steps[k] == w.steps[k - 1] + 1);
        }
      }
    }
  }
  SUBCASE("eviction drops whole episodes, oldest first") {
    ReplayBuffer buf(10);
    buf.add_episode(make_episode(0, 4));
    buf.add_episode(make_episode(1, 4));
    CHECK(buf.transition_count() == 8);
    buf.add_episode(make_episode(2, 4));
    CHECK(buf.episode_count() == 2);
    CHECK(buf.episode(0).front().episode_id == 1);
    CHECK(buf.transition_count() == 8);
    buf.add_episode(make_episode(3, 25));
    CHECK(buf.episode_count() == 1);
    CHECK(buf.episode(0).size() == 25);
    buf.add_episode({});
    CHECK(buf.episode_count() == 1);
    CHECK_THROWS(sample_sequences(ReplayBuffer(5), 1, 3, rng));
  }
}

TEST_CASE("warm-start rules") {
  const sim::ScenarioConfig cfg;
  const int dest = sim::other_lane(0, cfg.lanes);

  SUBCASE("clear lane follows long") {
    const Decision d = warm_start_policy(clear_road(8.0), cfg);
    CHECK(d == Decision{OptionId::LaneFollowWait, PlannerChoice::Choice0});
  }
  SUBCASE("obstacle close with an open target lane changes lanes") {
    for (double speed : {3.0, 6.0, 9.0}) {
      sim::Observation o = clear_road(speed);
      place(o, sim::Other::Obstacle, 0, 12.0);
      place(o, sim::Other::CarA, dest, 30.0, 6.0);
      place(o, sim::Other::CarB, dest, 25.0, 6.0);
      const Decision d = warm_start_policy(o, cfg);
      CHECK(d.option == OptionId::LaneChange);
      const auto band = speed >= cfg.fast_band_speed  ? PlannerChoice::Choice0
                        : speed < cfg.sharp_band_speed ? PlannerChoice::Choice2
                                                       : PlannerChoice::Choice1;
      CHECK(d.choice == band);
    }
  }
  SUBCASE("obstacle close with the target lane blocked waits") {
    sim::Observation o = clear_road(6.0);
    place(o, sim::Other::Obstacle, 0, 12.0);
    place(o, sim::Other::CarA, dest, 5.0, 6.0);
    CHECK(warm_start_policy(o, cfg) == Decision{OptionId::LaneFollowWait, PlannerChoice::Choice2});
  }
}

TEST_CASE("flat action index") {
  std::set<int> seen;
  for (OptionId o : kAllOptions)
    for (PlannerChoice c : kAllChoices) {
      const int k = flat_index({o, c});
      CHECK(from_flat_index(k) == Decision{o, c});
      seen.insert(k);
    }
  CHECK(seen.size() == FlatLearner::kActions);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == FlatLearner::kActions - 1);
}

TEST_CASE("training loop") {
  AgentConfig cfg;
  cfg.encoder_units = 8;
  cfg.hidden = {16};
  cfg.warm_start_episodes = 6;
  cfg.total_episodes = 14;
  cfg.target_sync_episodes = 4;
  cfg.batch_size = 8;
  cfg.epsilon = {1.0, 0.05, 8};
  RolloutConfig rollout;

  SUBCASE("warm start precedes any update and runs are repeatable") {
    HierarchicalLearner a(cfg, 3), b(cfg, 3);
    const auto sa = train(a, cfg, rollout, 3);
    const auto sb = train(b, cfg, rollout, 3);
    CHECK(sa.updates_before_first_policy_episode == 0);
    CHECK(sa.warm_start_transitions > 0);
    CHECK(a.gradient_updates() == static_cast<std::size_t>(8 * cfg.updates_per_episode));
    REQUIRE(sa.curve.size() == 14);
    for (std::size_t i = 0; i < sa.curve.size(); ++i) {
      CHECK(sa.curve[i].option_reward == sb.curve[i].option_reward);
      CHECK(sa.curve[i].planner_reward == sb.curve[i].planner_reward);
      CHECK(sa.curve[i].loss_option == sb.curve[i].loss_option);
      CHECK(sa.curve[i].epsilon == (i < 6 ? 0.0 : cfg.epsilon.at(static_cast<int>(i) - 6)));
    }
    for (std::size_t k = 0; k < a.options().blocks.size(); ++k)
      CHECK(a.options().blocks[k] == b.options().blocks[k]);
  }
  SUBCASE("hook sees every episode after its update") {
    HierarchicalLearner l(cfg, 3);
    std::vector<int> seen;
    std::vector<std::size_t> updates;
    train(l, cfg, rollout, 3, [&](int ep, const Learner& learner) {
      seen.push_back(ep);
      updates.push_back(learner.gradient_updates());
    });
    REQUIRE(seen.size() == 14);
    for (int i = 0; i < 14; ++i) {
      CHECK(seen[i] == i + 1);
      CHECK(updates[i] == static_cast<std::size_t>(std::max(0, i + 1 - 6) * cfg.updates_per_episode));
    }
  }
  SUBCASE("target networks move only at sync") {
    HierarchicalLearner l(cfg, 5);
    ReplayBuffer buf(1000);
    std::mt19937_64 rng(2);
    for (int e = 0; e < 3; ++e) {
      auto rec = run_episode(rollout, 40 + e, [&](const sim::HistoryVector& h, const sim::Observation&) {
        return l.act(h, 1.0, rng);
      });
      buf.add_episode(std::move(rec.transitions));
    }
    const auto to = nn::copy_params(l.options_target());
    const auto tp = nn::copy_params(l.planner_target());
    l.learn(buf, rng);
    l.learn(buf, rng);
    for (std::size_t k = 0; k < to.blocks.size(); ++k) {
      CHECK(l.options_target().blocks[k] == to.blocks[k]);
      CHECK(l.options().blocks[k] != to.blocks[k]);
    }
    for (std::size_t k = 0; k < tp.blocks.size(); ++k) CHECK(l.planner_target().blocks[k] == tp.blocks[k]);
    l.sync_targets();
    for (std::size_t k = 0; k < to.blocks.size(); ++k)
      CHECK(l.options_target().blocks[k] == l.options().blocks[k]);
    for (std::size_t k = 0; k < tp.blocks.size(); ++k)
      CHECK(l.planner_target().blocks[k] == l.planner().blocks[k]);
  }
  SUBCASE("checkpoint round trip preserves decisions") {
    HierarchicalLearner l(cfg, 7);
    FlatLearner f(cfg, 7);
    std::stringstream hs, fs;
    l.save(hs);
    f.save(fs);
    HierarchicalLearner l2(cfg, 8);
    FlatLearner f2(cfg, 8);
    l2.load(hs);
    f2.load(fs);
    std::mt19937_64 rng(1);
    sim::Observation o = clear_road(4.0);
    for (int i = 0; i < 50; ++i) {
      place(o, sim::Other::Obstacle, 0, 5.0 + i);
      const sim::HistoryVector h(o);
      CHECK(l.act(h, 0.0, rng) == l2.act(h, 0.0, rng));
      CHECK(f.act(h, 0.0, rng) == f2.act(h, 0.0, rng));
    }
  }
}
