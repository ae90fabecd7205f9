#include "hrlplan/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "hrlplan/nn/serialize.hpp"

namespace hrlplan::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return nn::parse_double(v);
  } catch (const nn::FormatError&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int x{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

struct Field {
  std::string key;
  std::string doc;
  bool environment;  // part of the shared environment every method must agree on
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <typename Access>
Field real(std::string key, std::string doc, bool env, Access access) {
  return {key, std::move(doc), env,
          [access](const ExperimentConfig& c) {
            return nn::format_double(access(const_cast<ExperimentConfig&>(c)));
          },
          [access, key](ExperimentConfig& c, const std::string& v) {
            access(c) = to_double(key, v);
          }};
}

template <typename Access>
Field integer(std::string key, std::string doc, bool env, Access access) {
  using T = std::remove_reference_t<decltype(access(std::declval<ExperimentConfig&>()))>;
  return {key, std::move(doc), env,
          [access](const ExperimentConfig& c) {
            return std::to_string(access(const_cast<ExperimentConfig&>(c)));
          },
          [access, key](ExperimentConfig& c, const std::string& v) {
            access(c) = to_int<T>(key, v);
          }};
}

template <typename Access>
Field boolean(std::string key, std::string doc, bool env, Access access) {
  return {key, std::move(doc), env,
          [access](const ExperimentConfig& c) {
            return std::string(access(const_cast<ExperimentConfig&>(c)) ? "true" : "false");
          },
          [access, key](ExperimentConfig& c, const std::string& v) {
            access(c) = to_bool(key, v);
          }};
}

template <typename Access>
Field interval(std::string key, std::string doc, bool env, Access access) {
  return {key, std::move(doc), env,
          [access](const ExperimentConfig& c) {
            const sim::Interval& r = access(const_cast<ExperimentConfig&>(c));
            return nn::format_double(r.lo) + "," + nn::format_double(r.hi);
          },
          [access, key](ExperimentConfig& c, const std::string& v) {
            const auto parts = split(v, ',');
            if (parts.size() != 2) throw ConfigError(key + ": expected lo,hi");
            access(c) = {to_double(key, parts[0]), to_double(key, parts[1])};
          }};
}

Field gains(std::string key, std::string doc, control::PidGains control::ControllerConfig::*m) {
  return {key, std::move(doc), true,
          [m](const ExperimentConfig& c) {
            const auto& g = c.control.*m;
            return nn::format_double(g.kp) + "," + nn::format_double(g.ki) + "," +
                   nn::format_double(g.kd) + "," + nn::format_double(g.integral_limit);
          },
          [m, key](ExperimentConfig& c, const std::string& v) {
            const auto parts = split(v, ',');
            if (parts.size() != 4) throw ConfigError(key + ": expected kp,ki,kd,integral_limit");
            auto& g = c.control.*m;
            g.kp = to_double(key, parts[0]);
            g.ki = to_double(key, parts[1]);
            g.kd = to_double(key, parts[2]);
            g.integral_limit = to_double(key, parts[3]);
          }};
}

Field primitive(OptionId o, PlannerChoice p) {
  std::string key = "direct." + std::string(to_string(o)) + "." +
                    std::to_string(index_of(p));
  std::string doc = "open-loop primitive for " + std::string(choice_label(o, p)) +
                    ": throttle,steer[,banked]";
  return {key, std::move(doc), false,
          [o, p](const ExperimentConfig& c) {
            const auto& e = c.primitives.at(o, p);
            std::string s = nn::format_double(e.throttle) + "," + nn::format_double(e.steer);
            if (e.banked) s += ",banked";
            return s;
          },
          [o, p, key](ExperimentConfig& c, const std::string& v) {
            const auto parts = split(v, ',');
            if (parts.size() < 2 || parts.size() > 3 || (parts.size() == 3 && parts[2] != "banked"))
              throw ConfigError(key + ": expected throttle,steer[,banked]");
            auto& e = c.primitives.entries[index_of(o)][index_of(p)];
            e.throttle = to_double(key, parts[0]);
            e.steer = to_double(key, parts[1]);
            e.banked = parts.size() == 3;
          }};
}

std::vector<Field> make_fields() {
  using C = ExperimentConfig;
  std::vector<Field> f;

  f.push_back({"method", "method: ddqn-pid, hddqn, slot-based-pid, hddqn-pid, hddqn-pid-lstm", false,
               [](const C& c) { return std::string(baselines::method_name(c.method.method)); },
               [](C& c, const std::string& v) {
                 auto m = baselines::parse_method(v);
                 if (!m) throw ConfigError("method: unknown method '" + v + "'");
                 c.method.method = *m;
               }});
  f.push_back(boolean("noise", "add Gaussian noise to observed speeds and distances", false,
                      [](C& c) -> bool& { return c.method.noise; }));
  f.push_back(real("noise.speed_std", "noise standard deviation on speeds (m/s)", true,
                   [](C& c) -> double& { return c.noise_std.speed; }));
  f.push_back(real("noise.distance_std", "noise standard deviation on chase distances (m)", true,
                   [](C& c) -> double& { return c.noise_std.distance; }));
  f.push_back(integer("seed", "master seed; evaluation episode i uses seed + i", true,
                      [](C& c) -> std::uint64_t& { return c.seed; }));
  f.push_back(integer("eval.episodes", "greedy evaluation episodes", true,
                      [](C& c) -> int& { return c.eval_episodes; }));
  f.push_back(boolean("eval.randomize", "draw evaluation scenarios from the ranges", true,
                      [](C& c) -> bool& { return c.eval_randomize; }));
  f.push_back(boolean("train.randomize", "draw training scenarios from the ranges", true,
                      [](C& c) -> bool& { return c.train_randomize; }));

  // Scenario.
  f.push_back(real("scenario.lane_width", "lane width (m)", true,
                   [](C& c) -> double& { return c.scenario.lanes.lane_width; }));
  f.push_back(real("scenario.lane_length", "road length (m)", true,
                   [](C& c) -> double& { return c.scenario.lanes.lane_length; }));
  f.push_back(real("scenario.goal_x", "longitudinal position of the goal line (m)", true,
                   [](C& c) -> double& { return c.scenario.goal_x; }));
  f.push_back(integer("scenario.tick_rate", "simulation ticks per second", true,
                      [](C& c) -> int& { return c.scenario.tick_rate; }));
  f.push_back(integer("scenario.timeout_ticks", "episode tick budget", true,
                      [](C& c) -> int& { return c.scenario.timeout_ticks; }));
  f.push_back(real("scenario.vehicle_length", "vehicle length (m)", true,
                   [](C& c) -> double& { return c.scenario.vehicle_length; }));
  f.push_back(real("scenario.vehicle_width", "vehicle width (m)", true,
                   [](C& c) -> double& { return c.scenario.vehicle_width; }));
  f.push_back(real("scenario.wheelbase", "ego wheelbase (m)", true,
                   [](C& c) -> double& { return c.scenario.limits.wheelbase; }));
  f.push_back(real("scenario.max_accel", "acceleration at full throttle (m/s^2)", true,
                   [](C& c) -> double& { return c.scenario.limits.max_accel; }));
  f.push_back(real("scenario.max_decel", "deceleration at full brake (m/s^2)", true,
                   [](C& c) -> double& { return c.scenario.limits.max_decel; }));
  f.push_back(real("scenario.max_steer", "steering angle at full lock (rad)", true,
                   [](C& c) -> double& { return c.scenario.limits.max_steer; }));
  f.push_back(integer("scenario.ego_lane", "ego start lane", true,
                      [](C& c) -> int& { return c.scenario.ego_lane; }));
  f.push_back(integer("scenario.target_lane", "lane of the moving cars", true,
                      [](C& c) -> int& { return c.scenario.target_lane; }));
  f.push_back(real("scenario.ego_start_x", "ego start position (m)", true,
                   [](C& c) -> double& { return c.scenario.ego_start_x; }));
  f.push_back(real("scenario.ego_speed", "ego initial speed (m/s)", true,
                   [](C& c) -> double& { return c.scenario.ego_initial_speed; }));
  f.push_back(real("scenario.obstacle_rear", "obstacle rear bumper position (m)", true,
                   [](C& c) -> double& { return c.scenario.obstacle_rear; }));
  f.push_back(interval("scenario.obstacle_rear_range", "randomized obstacle position lo,hi", true,
                       [](C& c) -> sim::Interval& { return c.scenario.obstacle_rear_range; }));
  f.push_back(real("scenario.car_a_gap", "car A rear gap ahead of the ego front (m)", true,
                   [](C& c) -> double& { return c.scenario.car_a_gap; }));
  f.push_back(interval("scenario.car_a_gap_range", "randomized car A gap lo,hi", true,
                       [](C& c) -> sim::Interval& { return c.scenario.car_a_gap_range; }));
  f.push_back(real("scenario.car_b_gap", "car B rear gap ahead of car A's front (m)", true,
                   [](C& c) -> double& { return c.scenario.car_b_gap; }));
  f.push_back(interval("scenario.car_b_gap_range", "randomized car B gap lo,hi", true,
                       [](C& c) -> sim::Interval& { return c.scenario.car_b_gap_range; }));
  f.push_back(real("scenario.car_a_speed", "car A speed (m/s)", true,
                   [](C& c) -> double& { return c.scenario.car_a_speed; }));
  f.push_back(real("scenario.car_b_speed", "car B speed (m/s)", true,
                   [](C& c) -> double& { return c.scenario.car_b_speed; }));
  f.push_back(interval("scenario.car_speed_range", "randomized car speeds lo,hi", true,
                       [](C& c) -> sim::Interval& { return c.scenario.target_speed_range; }));
  f.push_back(real("menu.follow_long", "long follow waypoint offset (m)", true,
                   [](C& c) -> double& { return c.scenario.follow_long; }));
  f.push_back(real("menu.follow_short", "short follow waypoint offset (m)", true,
                   [](C& c) -> double& { return c.scenario.follow_short; }));
  f.push_back(real("menu.wait", "wait waypoint offset (m)", true,
                   [](C& c) -> double& { return c.scenario.wait_distance; }));
  f.push_back(real("menu.change_fast", "fast lane-change waypoint offset (m)", true,
                   [](C& c) -> double& { return c.scenario.change_fast; }));
  f.push_back(real("menu.change_normal", "normal lane-change waypoint offset (m)", true,
                   [](C& c) -> double& { return c.scenario.change_normal; }));
  f.push_back(real("menu.change_sharp", "sharp lane-change waypoint offset (m)", true,
                   [](C& c) -> double& { return c.scenario.change_sharp; }));
  f.push_back(real("menu.follow_long_speed", "speed ceiling, long follow (m/s)", true,
                   [](C& c) -> double& { return c.scenario.follow_long_speed; }));
  f.push_back(real("menu.follow_short_speed", "speed ceiling, short follow (m/s)", true,
                   [](C& c) -> double& { return c.scenario.follow_short_speed; }));
  f.push_back(real("menu.crawl_speed", "speed ceiling, wait when the gap is safe (m/s)", true,
                   [](C& c) -> double& { return c.scenario.crawl_speed; }));
  f.push_back(real("menu.change_fast_speed", "speed ceiling, fast lane change (m/s)", true,
                   [](C& c) -> double& { return c.scenario.change_fast_speed; }));
  f.push_back(real("menu.change_normal_speed", "speed ceiling, normal lane change (m/s)", true,
                   [](C& c) -> double& { return c.scenario.change_normal_speed; }));
  f.push_back(real("menu.change_sharp_speed", "speed ceiling, sharp lane change (m/s)", true,
                   [](C& c) -> double& { return c.scenario.change_sharp_speed; }));
  f.push_back(real("menu.fast_band_speed", "ego speed at or above which fast is expected", true,
                   [](C& c) -> double& { return c.scenario.fast_band_speed; }));
  f.push_back(real("menu.sharp_band_speed", "ego speed below which sharp is expected", true,
                   [](C& c) -> double& { return c.scenario.sharp_band_speed; }));
  f.push_back(real("menu.safety_follow_distance", "reorientation point offset (m)", true,
                   [](C& c) -> double& { return c.scenario.safety_follow_distance; }));
  f.push_back(real("menu.safety_margin", "reorientation margin behind a front car (m)", true,
                   [](C& c) -> double& { return c.scenario.safety_margin; }));
  f.push_back(real("menu.safety_min_offset", "minimum reorientation offset (m)", true,
                   [](C& c) -> double& { return c.scenario.safety_min_offset; }));
  f.push_back(real("menu.sensing_range", "front car range considered for reorientation (m)", true,
                   [](C& c) -> double& { return c.scenario.sensing_range; }));

  // Rewards.
  f.push_back(real("reward.sigma1", "time penalty per tick", true,
                   [](C& c) -> double& { return c.weights.sigma1; }));
  f.push_back(real("reward.sigma2", "reward per meter of progress", true,
                   [](C& c) -> double& { return c.weights.sigma2; }));
  f.push_back(real("reward.sigma3", "collision penalty", true,
                   [](C& c) -> double& { return c.weights.sigma3; }));
  f.push_back(real("reward.sigma4", "penalty for an option or choice that was not needed", true,
                   [](C& c) -> double& { return c.weights.sigma4; }));
  f.push_back(real("reward.sigma5", "penalty for a mismatched lane-change profile", true,
                   [](C& c) -> double& { return c.weights.sigma5; }));
  f.push_back(real("reward.sigma6", "success reward", true,
                   [](C& c) -> double& { return c.weights.sigma6; }));

  // Control.
  f.push_back(gains("pid.longitudinal", "speed PID kp,ki,kd,integral_limit",
                    &control::ControllerConfig::longitudinal));
  f.push_back(gains("pid.lateral", "heading PID kp,ki,kd,integral_limit",
                    &control::ControllerConfig::lateral));
  f.push_back(real("pid.arrival_radius", "waypoint arrival radius (m)", true,
                   [](C& c) -> double& { return c.control.arrival_radius; }));
  f.push_back(integer("pid.subtrajectory_budget", "tick budget per sub-trajectory", true,
                      [](C& c) -> int& { return c.control.subtrajectory_budget; }));
  f.push_back(real("pid.throttle_rate", "largest throttle change per second, 0 disables", true,
                   [](C& c) -> double& { return c.control.throttle_rate; }));
  f.push_back(integer("pid.wait_hold_ticks", "stopped ticks that end a wait", true,
                      [](C& c) -> int& { return c.control.wait_hold_ticks; }));
  for (OptionId o : kAllOptions)
    for (PlannerChoice p : kAllChoices) f.push_back(primitive(o, p));
  f.push_back(integer("direct.burst_ticks", "ticks per open-loop primitive", false,
                      [](C& c) -> int& { return c.primitives.burst_ticks; }));

  // Learning.
  f.push_back(integer("agent.encoder_units", "LSTM / dense encoder width", false,
                      [](C& c) -> int& { return c.agent.encoder_units; }));
  f.push_back({"agent.hidden", "fully connected widths after the encoder, comma separated", false,
               [](const C& c) {
                 std::string s;
                 for (std::size_t i = 0; i < c.agent.hidden.size(); ++i)
                   s += (i ? "," : "") + std::to_string(c.agent.hidden[i]);
                 return s;
               },
               [](C& c, const std::string& v) {
                 c.agent.hidden.clear();
                 if (v.empty()) return;
                 for (const auto& part : split(v, ','))
                   c.agent.hidden.push_back(to_int<int>("agent.hidden", part));
               }});
  f.push_back(real("agent.gamma", "discount factor", false,
                   [](C& c) -> double& { return c.agent.gamma; }));
  f.push_back(integer("agent.batch_size", "sequences per gradient step", false,
                      [](C& c) -> int& { return c.agent.batch_size; }));
  f.push_back(integer("agent.updates_per_episode", "gradient steps after each episode", false,
                      [](C& c) -> int& { return c.agent.updates_per_episode; }));
  f.push_back(integer("agent.target_sync", "episodes between target network syncs", false,
                      [](C& c) -> int& { return c.agent.target_sync_episodes; }));
  f.push_back(integer("agent.buffer_capacity", "replay capacity in transitions", false,
                      [](C& c) -> std::size_t& { return c.agent.buffer_capacity; }));
  f.push_back(real("agent.epsilon_start", "initial exploration rate", false,
                   [](C& c) -> double& { return c.agent.epsilon.start; }));
  f.push_back(real("agent.epsilon_end", "final exploration rate", false,
                   [](C& c) -> double& { return c.agent.epsilon.end; }));
  f.push_back(integer("agent.epsilon_horizon", "episodes of linear epsilon decay", false,
                      [](C& c) -> int& { return c.agent.epsilon.horizon; }));
  f.push_back(real("agent.learning_rate", "SGD learning rate", false,
                   [](C& c) -> double& { return c.agent.learning_rate; }));
  f.push_back(real("agent.momentum", "SGD momentum", false,
                   [](C& c) -> double& { return c.agent.momentum; }));
  f.push_back(real("agent.grad_clip", "gradient norm clip, 0 disables", false,
                   [](C& c) -> double& { return c.agent.grad_clip; }));
  f.push_back(real("agent.reward_scale", "reward scale inside the learning targets", false,
                   [](C& c) -> double& { return c.agent.reward_scale; }));
  f.push_back(boolean("agent.option_double_q", "double Q bootstrap for the options network", false,
                      [](C& c) -> bool& { return c.agent.option_double_q; }));
  f.push_back(integer("agent.warm_start_episodes", "rule-based episodes before learning", false,
                      [](C& c) -> int& { return c.agent.warm_start_episodes; }));
  f.push_back(integer("agent.episodes", "total training episodes including warm start", false,
                      [](C& c) -> int& { return c.agent.total_episodes; }));
  f.push_back(real("norm.speed", "speed scale for network inputs", false,
                   [](C& c) -> double& { return c.agent.norm.speed; }));
  f.push_back(real("norm.distance", "distance scale for network inputs", false,
                   [](C& c) -> double& { return c.agent.norm.distance; }));
  f.push_back(real("norm.ratio", "ratio scale for network inputs", false,
                   [](C& c) -> double& { return c.agent.norm.ratio; }));
  f.push_back(real("norm.cap", "saturation of scaled distances and ratios", false,
                   [](C& c) -> double& { return c.agent.norm.cap; }));
  f.push_back(real("rules.change_trigger", "obstacle distance that arms a lane change (m)", false,
                   [](C& c) -> double& { return c.agent.rules.change_trigger; }));
  f.push_back(real("rules.gap_margin", "warm start target-lane margin (m)", false,
                   [](C& c) -> double& { return c.agent.rules.gap_margin; }));
  f.push_back(real("rules.slot_factor", "slot acceptance factor on the safety threshold", false,
                   [](C& c) -> double& { return c.agent.rules.slot_factor; }));

  std::sort(f.begin(), f.end(), [](const Field& a, const Field& b) { return a.key < b.key; });
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = make_fields();
  return f;
}

std::string serialize(const ExperimentConfig& cfg, bool environment_only) {
  std::string out;
  for (const Field& f : fields()) {
    if (environment_only && !f.environment) continue;
    out += f.key + " = " + f.get(cfg) + "\n";
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  scenario.validate();
  if (eval_episodes < 1) throw ConfigError("eval.episodes must be positive");
  if (noise_std.speed < 0 || noise_std.distance < 0)
    throw ConfigError("noise standard deviations must be non-negative");
  if (agent.batch_size < 1) throw ConfigError("agent.batch_size must be positive");
  if (agent.gamma < 0 || agent.gamma > 1) throw ConfigError("agent.gamma must lie in [0, 1]");
  if (agent.total_episodes < agent.warm_start_episodes)
    throw ConfigError("agent.episodes must cover the warm start");
  if (agent.encoder_units < 1) throw ConfigError("agent.encoder_units must be positive");
  for (int h : agent.hidden)
    if (h < 1) throw ConfigError("agent.hidden widths must be positive");
  if (agent.target_sync_episodes < 1) throw ConfigError("agent.target_sync must be positive");
  if (agent.buffer_capacity < 1) throw ConfigError("agent.buffer_capacity must be positive");
  if (control.subtrajectory_budget < 1 || primitives.burst_ticks < 1)
    throw ConfigError("tick budgets must be positive");
}

agent::RolloutConfig ExperimentConfig::rollout(bool for_training) const {
  agent::RolloutConfig r;
  r.scenario = scenario;
  r.weights = weights;
  r.control = control;
  r.primitives = primitives;
  r.actuation = baselines::actuation_of(method.method);
  r.noise = method.noise;
  r.noise_std = noise_std;
  r.randomize = for_training ? train_randomize : eval_randomize;
  return r;
}

agent::AgentConfig ExperimentConfig::agent_config() const {
  return baselines::agent_config_for(method.method, agent);
}

std::string ExperimentConfig::canonical() const { return serialize(*this, false); }

std::string ExperimentConfig::hash() const { return fnv1a_hex(canonical()); }

std::string ExperimentConfig::environment_hash() const { return fnv1a_hex(serialize(*this, true)); }

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const Field& f : fields()) {
    if (f.key == key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& is, ExperimentConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    set_key(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  base.validate();
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(in, std::move(base));
}

std::vector<KeyDoc> documented_keys() {
  std::vector<KeyDoc> out;
  for (const Field& f : fields()) out.push_back({f.key, f.doc});
  return out;
}

std::string annotated(const ExperimentConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) out += "# " + f.doc + "\n" + f.key + " = " + f.get(cfg) + "\n";
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hrlplan::harness
