#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hrlplan/harness/runner.hpp"

namespace fs = std::filesystem;
using namespace hrlplan;
using harness::ExperimentConfig;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string method;
  bool noise = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes;
  std::string out;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& f, const std::string& episodes_help) {
  cmd->add_option("--config", f.config_path, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--method", f.method,
                  "ddqn-pid, hddqn, slot-based-pid, hddqn-pid or hddqn-pid-lstm");
  cmd->add_flag("--noise", f.noise, "add Gaussian observation noise");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--episodes", f.episodes, episodes_help);
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--set", f.overrides, "extra key=value override, repeatable");
}

ExperimentConfig build_config(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = harness::load_config(f.config_path);
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw harness::ConfigError("--set expects key=value: " + kv);
    harness::set_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!f.method.empty()) harness::set_key(cfg, "method", f.method);
  if (f.noise) cfg.method.noise = true;
  if (f.seed) cfg.seed = *f.seed;
  return cfg;
}

fs::path out_dir(const CommonFlags& f, const ExperimentConfig& cfg) {
  if (!f.out.empty()) return f.out;
  return fs::path("runs") / (std::string(baselines::method_name(cfg.method.method)) +
                             (cfg.method.noise ? "-noise" : ""));
}

void print_metrics(const harness::MetricsReport& m) {
  std::cout << "episodes              " << m.episodes << '\n'
            << "total average reward  " << harness::fixed(m.total_average_reward, 2) << '\n'
            << "lane invasion rate %  " << harness::fixed(m.lane_invasion_rate, 1) << '\n'
            << "collision rate %      " << harness::fixed(m.collision_rate, 1) << '\n'
            << "success rate %        " << harness::fixed(m.success_rate, 1) << '\n'
            << "timeout rate %        " << harness::fixed(m.timeout_rate, 1) << '\n'
            << "jerk rms              " << harness::fixed(m.jerk_rms, 3) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical lane-change planner: training, evaluation and comparison"};
  app.require_subcommand(1);

  CommonFlags train_f, eval_f, cmp_f, trace_f, cfg_f;
  std::string eval_ckpt, trace_ckpt;
  std::optional<int> cmp_train_episodes;
  std::vector<std::string> cmp_methods;

  auto* train = app.add_subcommand("train", "train a method and write checkpoint, curve, config");
  add_common(train, train_f, "training episodes, warm start included");

  auto* eval = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
  add_common(eval, eval_f, "evaluation episodes");
  eval->add_option("--checkpoint", eval_ckpt, "checkpoint file (default <out>/checkpoint.txt)");

  auto* cmp = app.add_subcommand("compare", "train and evaluate every table row");
  add_common(cmp, cmp_f, "evaluation episodes per row");
  cmp->add_option("--train-episodes", cmp_train_episodes, "training episodes per row");
  cmp->remove_option(cmp->get_option("--method"));
  cmp->add_option("--method", cmp_methods, "restrict the table to these methods");

  auto* trace = app.add_subcommand("trace", "per-tick trajectory of one evaluation episode");
  add_common(trace, trace_f, "unused");
  trace->add_option("--checkpoint", trace_ckpt, "checkpoint file (default <out>/checkpoint.txt)");

  auto* show = app.add_subcommand("config", "print the effective config with key descriptions");
  add_common(show, cfg_f, "training episodes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      ExperimentConfig cfg = build_config(train_f);
      if (train_f.episodes) cfg.agent.total_episodes = *train_f.episodes;
      const fs::path dir = out_dir(train_f, cfg);
      auto run = harness::run_training(cfg, dir);
      std::cout << "trained " << baselines::method_label(cfg.method.method) << " ("
                << run.stats.curve.size() << " episodes), config hash " << cfg.hash() << " -> "
                << dir.string() << '\n';
    } else if (*eval) {
      ExperimentConfig cfg = build_config(eval_f);
      if (eval_f.episodes) cfg.eval_episodes = *eval_f.episodes;
      const fs::path dir = out_dir(eval_f, cfg);
      const fs::path ckpt = eval_ckpt.empty() ? dir / "checkpoint.txt" : fs::path(eval_ckpt);
      auto m = harness::run_evaluation(ckpt, cfg, cfg.eval_episodes, dir);
      print_metrics(m);
    } else if (*cmp) {
      ExperimentConfig base = build_config(cmp_f);
      if (cmp_f.episodes) base.eval_episodes = *cmp_f.episodes;
      if (cmp_train_episodes) base.agent.total_episodes = *cmp_train_episodes;
      std::vector<ExperimentConfig> configs;
      for (const auto& spec : baselines::comparison_rows()) {
        bool keep = cmp_methods.empty();
        for (const auto& name : cmp_methods) {
          auto m = baselines::parse_method(name);
          if (!m) throw harness::ConfigError("unknown method '" + name + "'");
          keep = keep || *m == spec.method;
        }
        if (!keep) continue;
        ExperimentConfig cfg = base;
        cfg.method = spec;
        configs.push_back(cfg);
      }
      const fs::path dir = cmp_f.out.empty() ? fs::path("runs/compare") : fs::path(cmp_f.out);
      auto rows = harness::run_comparison(configs, dir);
      harness::write_comparison_text(std::cout, rows);
    } else if (*trace) {
      ExperimentConfig cfg = build_config(trace_f);
      const fs::path dir = out_dir(trace_f, cfg);
      const fs::path ckpt = trace_ckpt.empty() ? dir / "checkpoint.txt" : fs::path(trace_ckpt);
      const std::uint64_t seed = trace_f.seed.value_or(cfg.seed);
      if (trace_f.out.empty()) {
        harness::export_trace(ckpt, cfg, seed, std::cout);
      } else {
        fs::create_directories(dir);
        std::ofstream out(dir / ("trace-" + std::to_string(seed) + ".csv"), std::ios::binary);
        harness::export_trace(ckpt, cfg, seed, out);
      }
    } else if (*show) {
      ExperimentConfig cfg = build_config(cfg_f);
      if (cfg_f.episodes) cfg.agent.total_episodes = *cfg_f.episodes;
      cfg.validate();
      std::cout << "# config_hash " << cfg.hash() << '\n' << harness::annotated(cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
