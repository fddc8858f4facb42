#include "hfb/agents.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace hfb {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

const Vector& arm_features(const Observation& obs, ActionIndex a) {
  return obs.action_features.empty() ? obs.context.features : obs.action_features[a];
}

void check_linear_obs(const Observation& obs, std::size_t k, std::size_t dim,
                      std::string_view who) {
  if (obs.action_features.empty()) {
    require(static_cast<std::size_t>(obs.context.features.size()) == dim,
            std::string(who) + ": context has dimension " +
                std::to_string(obs.context.features.size()) + ", expected " +
                std::to_string(dim));
    return;
  }
  require(obs.action_features.size() == k,
          std::string(who) + ": expected " + std::to_string(k) + " action feature vectors");
  for (const auto& x : obs.action_features) {
    require(static_cast<std::size_t>(x.size()) == dim,
            std::string(who) + ": action features have dimension " + std::to_string(x.size()) +
                ", expected " + std::to_string(dim));
  }
}

}  // namespace

// --- EpsilonGreedy ----------------------------------------------------------

EpsilonGreedyAgent::EpsilonGreedyAgent(std::size_t k, double epsilon)
    : epsilon_(epsilon), values_(Vector::Zero(static_cast<Eigen::Index>(k))), counts_(k, 0) {
  require(k >= 1, "epsilon_greedy: k must be >= 1");
  require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon_greedy: epsilon must lie in [0,1]");
}

ActResult EpsilonGreedyAgent::act(const Observation&, RngStream& rng) {
  const std::size_t k = num_actions();
  const ActionIndex greedy = argmax_tiebreak(values_);
  Vector probs = Vector::Constant(static_cast<Eigen::Index>(k), epsilon_ / static_cast<double>(k));
  probs(static_cast<Eigen::Index>(greedy)) += 1.0 - epsilon_;
  ActionIndex action = greedy;
  if (rng.uniform() < epsilon_) action = static_cast<ActionIndex>(rng.uniform_index(k));
  return {action, PolicyDistribution(std::move(probs))};
}

void EpsilonGreedyAgent::update(const Observation&, ActionIndex action, double reward,
                                RngStream&) {
  require(action < num_actions(), "epsilon_greedy: action out of range");
  const auto i = static_cast<Eigen::Index>(action);
  ++counts_[action];
  values_(i) += (reward - values_(i)) / static_cast<double>(counts_[action]);
}

// --- UCB1 -------------------------------------------------------------------

Ucb1Agent::Ucb1Agent(std::size_t k, double c, double temperature)
    : c_(c), temperature_(temperature), means_(k, 0.0), counts_(k, 0) {
  require(k >= 1, "ucb1: k must be >= 1");
  require(c >= 0.0, "ucb1: exploration coefficient must be >= 0");
  require(temperature > 0.0, "ucb1: temperature must be > 0");
}

ActResult Ucb1Agent::act(const Observation&, RngStream&) {
  const std::size_t k = num_actions();
  std::vector<ActionIndex> untried;
  for (std::size_t a = 0; a < k; ++a) {
    if (counts_[a] == 0) untried.push_back(a);
  }
  if (!untried.empty()) {
    Vector probs = Vector::Zero(static_cast<Eigen::Index>(k));
    for (auto a : untried) probs(static_cast<Eigen::Index>(a)) = 1.0 / static_cast<double>(untried.size());
    return {untried.front(), PolicyDistribution(std::move(probs))};
  }
  Vector scores(static_cast<Eigen::Index>(k));
  const double log_t = std::log(static_cast<double>(total_));
  for (std::size_t a = 0; a < k; ++a) {
    scores(static_cast<Eigen::Index>(a)) =
        means_[a] + c_ * std::sqrt(2.0 * log_t / static_cast<double>(counts_[a]));
  }
  return {argmax_tiebreak(scores), softmax(scores, temperature_)};
}

void Ucb1Agent::update(const Observation&, ActionIndex action, double reward, RngStream&) {
  require(action < num_actions(), "ucb1: action out of range");
  ++counts_[action];
  ++total_;
  means_[action] += (reward - means_[action]) / static_cast<double>(counts_[action]);
}

// --- LinUCB -----------------------------------------------------------------

void sherman_morrison_update(Matrix& a_inv, const Vector& x) {
  const Vector u = a_inv * x;
  const double denom = 1.0 + x.dot(u);
  a_inv.noalias() -= (u * u.transpose()) / denom;
  // A_inv stays symmetric in exact arithmetic; re-symmetrize against drift.
  a_inv = 0.5 * (a_inv + a_inv.transpose()).eval();
}

LinUcbAgent::LinUcbAgent(std::size_t k, std::size_t dim, double alpha, double temperature)
    : dim_(dim), alpha_(alpha), temperature_(temperature) {
  require(k >= 1 && dim >= 1, "linucb: k and dim must be >= 1");
  require(alpha >= 0.0, "linucb: alpha must be >= 0");
  require(temperature > 0.0, "linucb: temperature must be > 0");
  const auto d = static_cast<Eigen::Index>(dim);
  arms_.assign(k, Arm{Matrix::Identity(d, d), Matrix::Identity(d, d), Vector::Zero(d)});
}

Vector LinUcbAgent::theta(ActionIndex arm) const {
  const Arm& a = arms_.at(arm);
  return a.a_inv * a.b;
}

Vector LinUcbAgent::scores(const Observation& obs) const {
  check_linear_obs(obs, arms_.size(), dim_, "linucb");
  Vector s(static_cast<Eigen::Index>(arms_.size()));
  for (std::size_t a = 0; a < arms_.size(); ++a) {
    const Vector& x = arm_features(obs, a);
    const Arm& arm = arms_[a];
    const double width = std::sqrt(std::max(0.0, x.dot(arm.a_inv * x)));
    s(static_cast<Eigen::Index>(a)) = (arm.a_inv * arm.b).dot(x) + alpha_ * width;
  }
  return s;
}

ActResult LinUcbAgent::act(const Observation& obs, RngStream&) {
  const Vector s = scores(obs);
  return {argmax_tiebreak(s), softmax(s, temperature_)};
}

void LinUcbAgent::update(const Observation& obs, ActionIndex action, double reward, RngStream&) {
  require(action < arms_.size(), "linucb: action out of range");
  check_linear_obs(obs, arms_.size(), dim_, "linucb");
  const Vector& x = arm_features(obs, action);
  Arm& arm = arms_[action];
  arm.a.noalias() += x * x.transpose();
  arm.b += reward * x;
  sherman_morrison_update(arm.a_inv, x);
}

// --- Bootstrapped Thompson sampling ----------------------------------------

BootstrappedTsAgent::BootstrappedTsAgent(std::size_t k, std::size_t dim, std::size_t replicates,
                                         double update_prob, double prior_scale,
                                         RngStream init_rng)
    : k_(k), dim_(dim), replicates_(replicates), update_prob_(update_prob) {
  require(k >= 1 && dim >= 1, "bootstrapped_ts: k and dim must be >= 1");
  require(replicates >= 1, "bootstrapped_ts: replicates must be >= 1");
  require(update_prob > 0.0 && update_prob <= 1.0, "bootstrapped_ts: update_prob must lie in (0,1]");
  require(prior_scale >= 0.0, "bootstrapped_ts: prior_scale must be >= 0");
  const auto d = static_cast<Eigen::Index>(dim);
  models_.reserve(replicates * k);
  for (std::size_t i = 0; i < replicates * k; ++i) {
    Model m{Matrix::Identity(d, d), Vector(d), Vector()};
    for (Eigen::Index j = 0; j < d; ++j) m.b(j) = prior_scale * init_rng.normal();
    m.theta = m.b;
    models_.push_back(std::move(m));
  }
}

ActionIndex BootstrappedTsAgent::greedy(std::size_t replicate, const Observation& obs) const {
  Vector s(static_cast<Eigen::Index>(k_));
  for (std::size_t a = 0; a < k_; ++a) {
    s(static_cast<Eigen::Index>(a)) = model(replicate, a).theta.dot(arm_features(obs, a));
  }
  return argmax_tiebreak(s);
}

PolicyDistribution BootstrappedTsAgent::vote_distribution(const Observation& obs) const {
  check_linear_obs(obs, k_, dim_, "bootstrapped_ts");
  constexpr double kSmoothing = 1e-12;
  Vector votes = Vector::Constant(static_cast<Eigen::Index>(k_), kSmoothing);
  for (std::size_t r = 0; r < replicates_; ++r) {
    votes(static_cast<Eigen::Index>(greedy(r, obs))) += 1.0 / static_cast<double>(replicates_);
  }
  votes /= votes.sum();
  return PolicyDistribution(std::move(votes));
}

ActResult BootstrappedTsAgent::act(const Observation& obs, RngStream& rng) {
  PolicyDistribution votes = vote_distribution(obs);
  const auto r = static_cast<std::size_t>(rng.uniform_index(replicates_));
  return {greedy(r, obs), std::move(votes)};
}

void BootstrappedTsAgent::update(const Observation& obs, ActionIndex action, double reward,
                                 RngStream& rng) {
  require(action < k_, "bootstrapped_ts: action out of range");
  check_linear_obs(obs, k_, dim_, "bootstrapped_ts");
  const Vector& x = arm_features(obs, action);
  for (std::size_t r = 0; r < replicates_; ++r) {
    if (!rng.bernoulli(update_prob_)) continue;
    Model& m = model(r, action);
    sherman_morrison_update(m.a_inv, x);
    m.b += reward * x;
    m.theta = m.a_inv * m.b;
  }
}

// --- Softmax linear policy gradient ----------------------------------------

SoftmaxLinearAgent::SoftmaxLinearAgent(std::size_t k, std::size_t dim, double learning_rate,
                                       double temperature)
    : learning_rate_(learning_rate),
      temperature_(temperature),
      weights_(Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(dim))) {
  require(k >= 1 && dim >= 1, "softmax_linear: k and dim must be >= 1");
  require(learning_rate > 0.0, "softmax_linear: learning_rate must be > 0");
  require(temperature > 0.0, "softmax_linear: temperature must be > 0");
}

void SoftmaxLinearAgent::check_dim(const Vector& context) const {
  require(context.size() == weights_.cols(),
          "softmax_linear: context has dimension " + std::to_string(context.size()) +
              ", expected " + std::to_string(weights_.cols()));
}

void SoftmaxLinearAgent::set_weights(Matrix w) {
  require(w.rows() == weights_.rows() && w.cols() == weights_.cols(),
          "softmax_linear: weight shape mismatch");
  weights_ = std::move(w);
}

PolicyDistribution SoftmaxLinearAgent::policy(const Vector& context) const {
  check_dim(context);
  return softmax(weights_ * context, temperature_);
}

Matrix SoftmaxLinearAgent::log_prob_gradient(const Vector& context, ActionIndex action) const {
  const PolicyDistribution pi = policy(context);
  Vector coeff = -pi.probs();
  coeff(static_cast<Eigen::Index>(action)) += 1.0;
  return (coeff * context.transpose()) / temperature_;
}

ActResult SoftmaxLinearAgent::act(const Observation& obs, RngStream& rng) {
  PolicyDistribution pi = policy(obs.context.features);
  const ActionIndex a = sample(pi, rng);
  return {a, std::move(pi)};
}

void SoftmaxLinearAgent::update(const Observation& obs, ActionIndex action, double reward,
                                RngStream&) {
  require(action < num_actions(), "softmax_linear: action out of range");
  weights_ += learning_rate_ * reward * log_prob_gradient(obs.context.features, action);
}

// --- HybridLinear -----------------------------------------------------------

HybridLinearAgent::HybridLinearAgent(std::size_t k, std::size_t dim, Features mode,
                                     double learning_rate, double reg, double temperature,
                                     bool sample_action)
    : k_(k),
      dim_(dim),
      mode_(mode),
      learning_rate_(learning_rate),
      reg_(reg),
      temperature_(temperature),
      sample_action_(sample_action) {
  require(k >= 1 && dim >= 1, "hybrid_linear: k and dim must be >= 1");
  require(learning_rate > 0.0, "hybrid_linear: learning_rate must be > 0");
  require(reg >= 0.0, "hybrid_linear: reg must be >= 0");
  require(temperature > 0.0, "hybrid_linear: temperature must be > 0");
  const std::size_t n = mode == Features::kPerAction ? dim : dim * k;
  theta_ = Vector::Zero(static_cast<Eigen::Index>(n));
}

void HybridLinearAgent::set_theta(Vector theta) {
  require(theta.size() == theta_.size(), "hybrid_linear: theta size mismatch");
  theta_ = std::move(theta);
}

void HybridLinearAgent::check(const Observation& obs) const {
  if (mode_ == Features::kPerAction) {
    require(!obs.action_features.empty(), "hybrid_linear: per-action features required");
  } else {
    require(obs.action_features.empty(), "hybrid_linear: block mode expects a shared context");
  }
  check_linear_obs(obs, k_, dim_, "hybrid_linear");
}

Vector HybridLinearAgent::scores(const Observation& obs) const {
  check(obs);
  Vector s(static_cast<Eigen::Index>(k_));
  const auto d = static_cast<Eigen::Index>(dim_);
  for (std::size_t a = 0; a < k_; ++a) {
    const auto i = static_cast<Eigen::Index>(a);
    s(i) = mode_ == Features::kPerAction
               ? obs.action_features[a].dot(theta_)
               : theta_.segment(i * d, d).dot(obs.context.features);
  }
  return s;
}

ActResult HybridLinearAgent::act(const Observation& obs, RngStream& rng) {
  PolicyDistribution p = softmax(scores(obs), temperature_);
  const ActionIndex a = sample_action_ ? sample(p, rng) : argmax_tiebreak(p.probs());
  return {a, std::move(p)};
}

void HybridLinearAgent::update(const Observation& obs, ActionIndex action, double reward,
                               RngStream&) {
  require(action < k_, "hybrid_linear: action out of range");
  require(std::isfinite(reward), "hybrid_linear: reward must be finite");
  check(obs);
  const Vector old = theta_;
  if (mode_ == Features::kPerAction) {
    const Vector& x = obs.action_features[action];
    theta_ += learning_rate_ * (reward - x.dot(old)) * x;
  } else {
    const auto d = static_cast<Eigen::Index>(dim_);
    const auto off = static_cast<Eigen::Index>(action) * d;
    const Vector& x = obs.context.features;
    theta_.segment(off, d) += learning_rate_ * (reward - x.dot(old.segment(off, d))) * x;
  }
  theta_ -= reg_ * old;
}

// --- factory ----------------------------------------------------------------

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kEpsilonGreedy: return "epsilon_greedy";
    case AgentKind::kUcb1: return "ucb1";
    case AgentKind::kLinUcb: return "linucb";
    case AgentKind::kBootstrappedTs: return "bootstrapped_ts";
    case AgentKind::kSoftmaxLinear: return "softmax_linear";
    case AgentKind::kHybridLinear: return "hybrid_linear";
  }
  return "unknown";
}

AgentKind parse_agent_kind(std::string_view name) {
  for (auto k : {AgentKind::kEpsilonGreedy, AgentKind::kUcb1, AgentKind::kLinUcb,
                 AgentKind::kBootstrappedTs, AgentKind::kSoftmaxLinear, AgentKind::kHybridLinear}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown agent type '" + std::string(name) + "'");
}

void AgentSpec::validate() const {
  require(epsilon >= 0.0 && epsilon <= 1.0, "agent.epsilon must lie in [0,1]");
  require(ucb_c >= 0.0, "agent.c must be >= 0");
  require(linucb_alpha >= 0.0, "agent.alpha must be >= 0");
  require(temperature > 0.0 && std::isfinite(temperature), "agent.temperature must be > 0");
  require(replicates >= 1, "agent.replicates must be >= 1");
  require(update_prob > 0.0 && update_prob <= 1.0, "agent.update_prob must lie in (0,1]");
  require(prior_scale >= 0.0, "agent.prior_scale must be >= 0");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "agent.learning_rate must be > 0");
  require(reg >= 0.0, "agent.reg must be >= 0");
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const Environment& env,
                                  RngStream init_rng) {
  spec.validate();
  const std::size_t k = env.num_actions();
  const std::size_t xdim =
      env.action_feature_dim() > 0 ? env.action_feature_dim() : env.context_dim();
  switch (spec.kind) {
    case AgentKind::kEpsilonGreedy:
      return std::make_unique<EpsilonGreedyAgent>(k, spec.epsilon);
    case AgentKind::kUcb1:
      return std::make_unique<Ucb1Agent>(k, spec.ucb_c, spec.temperature);
    case AgentKind::kLinUcb:
      return std::make_unique<LinUcbAgent>(k, xdim, spec.linucb_alpha, spec.temperature);
    case AgentKind::kBootstrappedTs:
      return std::make_unique<BootstrappedTsAgent>(k, xdim, spec.replicates, spec.update_prob,
                                                   spec.prior_scale, init_rng);
    case AgentKind::kSoftmaxLinear:
      return std::make_unique<SoftmaxLinearAgent>(k, env.context_dim(), spec.learning_rate,
                                                  spec.temperature);
    case AgentKind::kHybridLinear: {
      const auto mode = env.action_feature_dim() > 0 ? HybridLinearAgent::Features::kPerAction
                                                     : HybridLinearAgent::Features::kBlock;
      return std::make_unique<HybridLinearAgent>(k, xdim, mode, spec.learning_rate, spec.reg,
                                                 spec.temperature, spec.sample_action);
    }
  }
  throw std::invalid_argument("unknown agent kind");
}

}  // namespace hfb
