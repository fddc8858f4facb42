#include "hfb/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <type_traits>

#include "hfb/io.hpp"

namespace hfb {

using nlohmann::json;

std::string_view to_string(FeedbackType type) {
  switch (type) {
    case FeedbackType::kAR: return "AR";
    case FeedbackType::kRM: return "RM";
    case FeedbackType::kHybrid: return "hybrid";
  }
  return "AR";
}

std::optional<double> ExperimentConfig::gate_lambda() const {
  if (const auto* g = std::get_if<FixedEntropyGate>(&gate)) return g->lambda;
  return std::nullopt;
}

namespace {

// Sub-validators lead their messages with the dotted key ("agent.epsilon must
// ..."); use it as the error field when present.
[[noreturn]] void rethrow(const std::string& section, const std::invalid_argument& e) {
  const std::string what = e.what();
  const std::string head = what.substr(0, what.find(' '));
  if (head.rfind(section + ".", 0) == 0) throw ConfigError(head, what.substr(head.size() + 1));
  throw ConfigError(section, what);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (rounds < 1) throw ConfigError("rounds", "must be >= 1");
  if (runs < 1) throw ConfigError("runs", "must be >= 1");
  try {
    if (env.kind == EnvSpec::Kind::kSynthetic) env.synthetic.validate();
    else if (env.dataset_path.empty()) throw ConfigError("env.path", "dataset path required");
    agent.validate();
    hfb::validate(gate);
    expert.validate();
    cost.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    for (auto section : {"env", "agent", "gate", "expert", "cost"}) {
      if (what.rfind(std::string(section) + ".", 0) == 0) rethrow(section, e);
    }
    throw ConfigError("<config>", what);
  }
}

namespace {

// Reads typed optional keys out of one JSON object and rejects unknown keys.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return fallback;
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw ConfigError(field(key), "expected a number");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_integer() || (std::is_unsigned_v<T> && !it->is_number_unsigned())) {
          throw ConfigError(field(key), "expected a non-negative integer");
        }
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw ConfigError(field(key), "expected true or false");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ConfigError(field(key), "expected a string");
      }
      return it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(field(key), e.what());
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& child(const std::string& key) {
    seen_.insert(key);
    static const json kEmpty = json::object();
    auto it = j_.find(key);
    return it == j_.end() ? kEmpty : *it;
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

EnvSpec parse_env(const json& j, const std::filesystem::path& base_dir) {
  Section s(j, "env");
  EnvSpec env;
  const auto type = s.get<std::string>("type", "synthetic");
  if (type == "synthetic") {
    env.kind = EnvSpec::Kind::kSynthetic;
    env.name = s.get<std::string>("name", "synthetic");
    auto& p = env.synthetic;
    p.d = s.get<std::size_t>("d", 10);
    p.k = s.get<std::size_t>("k", 10);
    p.noise_sigma = s.get<double>("noise_sigma", 0.1);
    p.nonlinear = s.get<bool>("nonlinear", false);
    p.sparsity_rho = s.get<double>("sparsity_rho", 1.0);
    p.seed = s.get<std::uint64_t>("seed", 0);
    if (s.has("theta_star")) {
      const json& t = s.child("theta_star");
      if (!t.is_array()) throw ConfigError("env.theta_star", "expected an array of numbers");
      p.theta_star.resize(static_cast<Eigen::Index>(t.size()));
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (!t[i].is_number()) throw ConfigError("env.theta_star", "expected an array of numbers");
        p.theta_star(static_cast<Eigen::Index>(i)) = t[i].get<double>();
      }
    } else {
      p.theta_star = SyntheticEnvParams::default_theta(p.d, p.seed);
    }
  } else if (type == "dataset") {
    env.kind = EnvSpec::Kind::kDataset;
    const auto path = s.get<std::string>("path", "");
    if (path.empty()) throw ConfigError("env.path", "dataset path required");
    env.dataset_path = std::filesystem::path(path);
    if (env.dataset_path.is_relative() && !base_dir.empty()) {
      env.dataset_path = base_dir / env.dataset_path;
    }
    env.dataset_path = std::filesystem::absolute(env.dataset_path).lexically_normal();
    env.name = s.get<std::string>("name", env.dataset_path.stem().string());
  } else {
    throw ConfigError("env.type", "unknown environment type '" + type + "'");
  }
  s.finish();
  return env;
}

AgentSpec parse_agent(const json& j) {
  Section s(j, "agent");
  AgentSpec a;
  try {
    a.kind = parse_agent_kind(s.get<std::string>("type", "hybrid_linear"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("agent.type", e.what());
  }
  a.epsilon = s.get<double>("epsilon", a.epsilon);
  a.ucb_c = s.get<double>("c", a.ucb_c);
  a.linucb_alpha = s.get<double>("alpha", a.linucb_alpha);
  a.temperature = s.get<double>("temperature", a.temperature);
  a.replicates = s.get<std::size_t>("replicates", a.replicates);
  a.update_prob = s.get<double>("update_prob", a.update_prob);
  a.prior_scale = s.get<double>("prior_scale", a.prior_scale);
  a.learning_rate = s.get<double>("learning_rate", a.learning_rate);
  a.reg = s.get<double>("reg", a.reg);
  a.sample_action = s.get<bool>("sample_action", a.sample_action);
  s.finish();
  return a;
}

GatePolicy parse_gate(const json& j, std::uint64_t rounds) {
  Section s(j, "gate");
  const auto type = s.get<std::string>("type", "never");
  GatePolicy g;
  if (type == "never") {
    g = NeverGate{};
  } else if (type == "always") {
    g = AlwaysGate{};
  } else if (type == "fixed_entropy") {
    if (!s.has("lambda")) throw ConfigError("gate.lambda", "required for fixed_entropy");
    g = FixedEntropyGate{s.get<double>("lambda", 0.0)};
  } else if (type == "periodic") {
    g = PeriodicGate{s.get<std::uint64_t>("every", 1)};
  } else if (type == "hybrid_dynamic") {
    g = HybridDynamicGate{s.get<double>("tau_init", 0.5), s.get<double>("tau_max", 1.5),
                          s.get<std::uint64_t>("T", rounds)};
  } else {
    throw ConfigError("gate.type", "unknown gate type '" + type + "'");
  }
  s.finish();
  return g;
}

ExpertConfig parse_expert(const json& j) {
  Section s(j, "expert");
  ExpertConfig e;
  e.quality = s.get<double>("quality", e.quality);
  e.rm_penalty = s.get<double>("penalty", e.rm_penalty);
  const auto mode = s.get<std::string>("mode", "full_label_set");
  if (mode == "full_label_set") e.mode = RecommendMode::kFullLabelSet;
  else if (mode == "singleton") e.mode = RecommendMode::kSingleton;
  else throw ConfigError("expert.mode", "expected full_label_set or singleton");
  s.finish();
  return e;
}

}  // namespace

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  Section root(j, "");
  ExperimentConfig cfg;
  cfg.rounds = root.get<std::uint64_t>("rounds", cfg.rounds);
  cfg.runs = root.get<std::uint64_t>("runs", cfg.runs);
  cfg.seed = root.get<std::uint64_t>("seed", cfg.seed);
  cfg.out_dir = root.get<std::string>("out_dir", cfg.out_dir.string());
  cfg.env = parse_env(root.child("env"), base_dir);
  cfg.agent = parse_agent(root.child("agent"));
  cfg.gate = parse_gate(root.child("gate"), cfg.rounds);
  cfg.expert = parse_expert(root.child("expert"));
  {
    Section c(root.child("cost"), "cost");
    cfg.cost.c_human = c.get<double>("human", 0.0);
    cfg.cost.c_system = c.get<double>("system", 0.0);
    cfg.cost.c_opportunity = c.get<double>("opportunity", 0.0);
    c.finish();
  }
  const bool hybrid_gate = std::holds_alternative<HybridDynamicGate>(cfg.gate);
  const auto fb = root.get<std::string>("feedback_type", hybrid_gate ? "hybrid" : "AR");
  if (fb == "AR") cfg.feedback_type = FeedbackType::kAR;
  else if (fb == "RM") cfg.feedback_type = FeedbackType::kRM;
  else if (fb == "hybrid") cfg.feedback_type = FeedbackType::kHybrid;
  else throw ConfigError("feedback_type", "expected AR, RM or hybrid");
  root.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(j, path.parent_path());
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["rounds"] = cfg.rounds;
  j["runs"] = cfg.runs;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir.string();
  j["feedback_type"] = std::string(to_string(cfg.feedback_type));

  json env;
  env["name"] = cfg.env.name;
  if (cfg.env.kind == EnvSpec::Kind::kSynthetic) {
    const auto& p = cfg.env.synthetic;
    env["type"] = "synthetic";
    env["d"] = p.d;
    env["k"] = p.k;
    env["noise_sigma"] = p.noise_sigma;
    env["nonlinear"] = p.nonlinear;
    env["sparsity_rho"] = p.sparsity_rho;
    env["seed"] = p.seed;
    env["theta_star"] = std::vector<double>(p.theta_star.data(), p.theta_star.data() + p.theta_star.size());
  } else {
    env["type"] = "dataset";
    env["path"] = cfg.env.dataset_path.string();
  }
  j["env"] = env;

  const auto& a = cfg.agent;
  j["agent"] = {{"type", std::string(to_string(a.kind))},
                {"epsilon", a.epsilon},
                {"c", a.ucb_c},
                {"alpha", a.linucb_alpha},
                {"temperature", a.temperature},
                {"replicates", a.replicates},
                {"update_prob", a.update_prob},
                {"prior_scale", a.prior_scale},
                {"learning_rate", a.learning_rate},
                {"reg", a.reg},
                {"sample_action", a.sample_action}};

  json gate;
  gate["type"] = gate_name(cfg.gate);
  if (const auto* g = std::get_if<FixedEntropyGate>(&cfg.gate)) gate["lambda"] = g->lambda;
  if (const auto* g = std::get_if<PeriodicGate>(&cfg.gate)) gate["every"] = g->every;
  if (const auto* g = std::get_if<HybridDynamicGate>(&cfg.gate)) {
    gate["tau_init"] = g->tau_init;
    gate["tau_max"] = g->tau_max;
    gate["T"] = g->horizon;
  }
  j["gate"] = gate;

  j["expert"] = {{"quality", cfg.expert.quality},
                 {"penalty", cfg.expert.rm_penalty},
                 {"mode", cfg.expert.mode == RecommendMode::kSingleton ? "singleton" : "full_label_set"}};
  j["cost"] = {{"human", cfg.cost.c_human},
               {"system", cfg.cost.c_system},
               {"opportunity", cfg.cost.c_opportunity}};
  return j;
}

std::vector<double> lambda_preset(std::string_view name) {
  if (name == "bibtex") return {2.5, 3.5, 5.0, 6.5, 9.0};
  if (name == "mediamill") return {1.5, 2.5, 3.0, 4.5, 7.0};
  if (name == "delicious") return {1.5, 2.5, 4.5, 6.5, 9.0};
  if (name == "yahoo") return {1.5, 2.5, 4.5, 7.0, 9.0};
  if (name == "all") {
    std::set<double> all;
    for (auto n : {"bibtex", "mediamill", "delicious", "yahoo"}) {
      for (double v : lambda_preset(n)) all.insert(v);
    }
    return {all.begin(), all.end()};
  }
  throw std::invalid_argument("unknown lambda preset '" + std::string(name) + "'");
}

}  // namespace hfb
