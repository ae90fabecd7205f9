#include "hrlplan/harness/runner.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hrlplan/nn/serialize.hpp"

namespace hrlplan::harness {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
}

std::string event_label(const sim::Events& e, bool invasion_onset) {
  std::string s;
  auto add = [&](const char* name) { s += (s.empty() ? "" : "|") + std::string(name); };
  if (invasion_onset) add("lane_invasion");
  if (e.collision) add("collision");
  if (e.success) add("success");
  if (e.timeout) add("timeout");
  return s;
}

}  // namespace

TrainingRun train_method(const ExperimentConfig& cfg, const agent::EpisodeHook& hook) {
  cfg.validate();
  TrainingRun run;
  if (!baselines::is_learned(cfg.method.method)) return run;
  const agent::AgentConfig acfg = cfg.agent_config();
  run.learner = baselines::make_learner(cfg.method.method, acfg, cfg.seed);
  run.stats = agent::train(*run.learner, acfg, cfg.rollout(true), cfg.seed, hook);
  return run;
}

agent::PolicyFn make_policy(const ExperimentConfig& cfg, const agent::Learner* learner) {
  if (learner) return agent::greedy_policy(*learner);
  const sim::ScenarioConfig scenario = cfg.scenario;
  const agent::RuleParams rules = cfg.agent.rules;
  return [scenario, rules](const sim::HistoryVector& h, const sim::Observation&) {
    return baselines::slot_based_policy(h.latest(), scenario, rules);
  };
}

MetricsReport evaluate(const ExperimentConfig& cfg, const agent::PolicyFn& policy, int episodes) {
  const agent::RolloutConfig rollout = cfg.rollout(false);
  std::vector<EpisodeRow> rows;
  rows.reserve(episodes);
  for (int i = 0; i < episodes; ++i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    auto rec = agent::run_episode(rollout, seed, policy, i);
    rows.push_back({i, seed, rec.result});
  }
  return compute_metrics(std::move(rows));
}

void write_checkpoint(std::ostream& os, const ExperimentConfig& cfg,
                      const agent::Learner* learner) {
  os << "hrlplan-checkpoint 1\n"
     << "method " << baselines::method_name(cfg.method.method) << '\n'
     << "config_hash " << cfg.hash() << '\n'
     << "kind " << (learner ? "networks" : "rule-based") << '\n';
  if (learner) learner->save(os);
}

std::unique_ptr<agent::Learner> read_checkpoint(std::istream& is, const ExperimentConfig& cfg) {
  std::string magic, key, method, hash, kind;
  int version = 0;
  if (!(is >> magic >> version) || magic != "hrlplan-checkpoint" || version != 1)
    throw CheckpointError("not an hrlplan checkpoint");
  if (!(is >> key >> method) || key != "method") throw CheckpointError("checkpoint: missing method");
  if (!(is >> key >> hash) || key != "config_hash")
    throw CheckpointError("checkpoint: missing config hash");
  if (!(is >> key >> kind) || key != "kind") throw CheckpointError("checkpoint: missing kind");

  const auto stored = baselines::parse_method(method);
  if (!stored || *stored != cfg.method.method)
    throw CheckpointError("checkpoint method '" + method + "' does not match config method '" +
                          std::string(baselines::method_name(cfg.method.method)) + "'");
  if (kind == "rule-based") {
    if (baselines::is_learned(*stored)) throw CheckpointError("checkpoint: missing networks");
    return nullptr;
  }
  if (kind != "networks") throw CheckpointError("checkpoint: unknown kind '" + kind + "'");
  auto learner = baselines::make_learner(*stored, cfg.agent_config(), cfg.seed);
  try {
    learner->load(is);
  } catch (const nn::FormatError& e) {
    throw CheckpointError(e.what());
  }
  return learner;
}

void write_learning_curve(std::ostream& os, const std::vector<agent::LearningCurveRow>& curve) {
  using nn::format_double;
  os << "episode,option_reward,planner_reward,outcome,epsilon,loss_o,loss_p\n";
  for (const auto& r : curve) {
    os << r.episode << ',' << format_double(r.option_reward) << ','
       << format_double(r.planner_reward) << ',' << sim::to_string(r.outcome) << ','
       << format_double(r.epsilon) << ',' << format_double(r.loss_option) << ','
       << format_double(r.loss_planner) << '\n';
  }
}

TrainingRun run_training(const ExperimentConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  prepare_dir(out_dir);
  TrainingRun run = train_method(cfg);
  {
    auto out = open_out(out_dir / "checkpoint.txt");
    write_checkpoint(out, cfg, run.learner.get());
  }
  {
    auto out = open_out(out_dir / "curve.csv");
    write_learning_curve(out, run.stats.curve);
  }
  {
    auto out = open_out(out_dir / "config.cfg");
    out << "# config_hash " << cfg.hash() << "\n# environment_hash " << cfg.environment_hash()
        << '\n'
        << cfg.canonical();
  }
  return run;
}

MetricsReport run_evaluation(const fs::path& checkpoint, const ExperimentConfig& cfg, int episodes,
                             const fs::path& out_dir) {
  cfg.validate();
  if (episodes < 1) throw ConfigError("evaluation needs at least one episode");
  std::ifstream in(checkpoint);
  if (!in) throw CheckpointError("cannot open checkpoint '" + checkpoint.string() + "'");
  auto learner = read_checkpoint(in, cfg);
  MetricsReport m = evaluate(cfg, make_policy(cfg, learner.get()), episodes);
  if (!out_dir.empty()) {
    prepare_dir(out_dir);
    {
      auto out = open_out(out_dir / "episodes.csv");
      write_episode_csv(out, m);
    }
    auto out = open_out(out_dir / "summary.csv");
    write_summary(out, m);
    out << "config_hash," << cfg.hash() << '\n'
        << "environment_hash," << cfg.environment_hash() << '\n'
        << "first_seed," << cfg.seed << '\n';
  }
  return m;
}

std::vector<ComparisonRow> run_comparison(const std::vector<ExperimentConfig>& configs) {
  std::vector<ComparisonRow> rows;
  for (const ExperimentConfig& cfg : configs) {
    TrainingRun run = train_method(cfg);
    ComparisonRow row;
    row.spec = cfg.method;
    row.config_hash = cfg.hash();
    row.environment_hash = cfg.environment_hash();
    row.metrics = evaluate(cfg, make_policy(cfg, run.learner.get()), cfg.eval_episodes);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

constexpr const char* kColumns[] = {"Method",
                                    "Gaussian Noise",
                                    "Total Average Reward",
                                    "Lane Invasion Rate %",
                                    "Collision Rate %",
                                    "Success Rate %",
                                    "Timeout Rate %",
                                    "Config Hash"};

std::vector<std::string> cells(const ComparisonRow& r) {
  const auto& m = r.metrics;
  return {std::string(baselines::method_label(r.spec.method)),
          r.spec.noise ? "Yes" : "No",
          fixed(m.total_average_reward, 2),
          fixed(m.lane_invasion_rate, 1),
          fixed(m.collision_rate, 1),
          fixed(m.success_rate, 1),
          fixed(m.timeout_rate, 1),
          r.config_hash};
}

}  // namespace

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  for (std::size_t i = 0; i < std::size(kColumns); ++i) os << (i ? "," : "") << kColumns[i];
  os << '\n';
  for (const auto& r : rows) {
    const auto c = cells(r);
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << '\n';
  }
}

void write_comparison_text(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  constexpr std::size_t n = std::size(kColumns);
  std::vector<std::size_t> width(n);
  for (std::size_t i = 0; i < n; ++i) width[i] = std::string(kColumns[i]).size();
  std::vector<std::vector<std::string>> table;
  for (const auto& r : rows) {
    table.push_back(cells(r));
    for (std::size_t i = 0; i < n; ++i) width[i] = std::max(width[i], table.back()[i].size());
  }
  auto line = [&](const std::vector<std::string>& c) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i) os << "  ";
      if (i < 2) {
        os << std::left << std::setw(static_cast<int>(width[i])) << c[i];
      } else {
        os << std::right << std::setw(static_cast<int>(width[i])) << c[i];
      }
    }
    os << '\n';
  };
  line(std::vector<std::string>(std::begin(kColumns), std::end(kColumns)));
  std::size_t total = 2 * (n - 1);
  for (auto w : width) total += w;
  os << std::string(total, '-') << '\n';
  for (const auto& c : table) line(c);
}

std::vector<ComparisonRow> run_comparison(const std::vector<ExperimentConfig>& configs,
                                          const fs::path& out_dir) {
  prepare_dir(out_dir);
  auto rows = run_comparison(configs);
  {
    auto out = open_out(out_dir / "comparison.csv");
    write_comparison_csv(out, rows);
  }
  auto out = open_out(out_dir / "comparison.txt");
  write_comparison_text(out, rows);
  return rows;
}

void export_trace(std::ostream& os, const ExperimentConfig& cfg, const agent::PolicyFn& policy,
                  std::uint64_t seed) {
  using nn::format_double;
  auto rec = agent::run_episode(cfg.rollout(false), seed, policy, 0, true);
  os << "tick,x,y,heading,speed,option,planner_choice,throttle,steer,r_option,r_planner,event\n";
  for (const auto& row : rec.trace) {
    const auto& t = row.tick;
    os << t.tick << ',' << format_double(t.x) << ',' << format_double(t.y) << ','
       << format_double(t.heading) << ',' << format_double(t.speed) << ','
       << to_string(row.option) << ',' << choice_label(row.option, row.choice) << ','
       << format_double(t.throttle) << ',' << format_double(t.steer) << ','
       << format_double(t.r_option) << ',' << format_double(t.r_planner) << ','
       << event_label(t.events, t.invasion_onset) << '\n';
  }
}

void export_trace(const fs::path& checkpoint, const ExperimentConfig& cfg, std::uint64_t seed,
                  std::ostream& os) {
  cfg.validate();
  std::ifstream in(checkpoint);
  if (!in) throw CheckpointError("cannot open checkpoint '" + checkpoint.string() + "'");
  auto learner = read_checkpoint(in, cfg);
  export_trace(os, cfg, make_policy(cfg, learner.get()), seed);
}

}  // namespace hrlplan::harness
