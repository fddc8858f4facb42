#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hfb/core.hpp"
#include "hfb/environments.hpp"
#include "hfb/rng.hpp"

namespace hfb {

// What an agent sees in a round. `action_features` is empty when the
// environment only provides the shared context.
struct Observation {
  const Context& context;
  const std::vector<Vector>& action_features;

  static Observation from(const RoundData& rd) { return {rd.context, rd.action_features}; }
};

struct ActResult {
  ActionIndex action;
  PolicyDistribution policy;
};

class Agent {
 public:
  virtual ~Agent() = default;

  virtual std::size_t num_actions() const = 0;
  virtual std::string_view name() const = 0;

  // Chooses an action and reports the distribution it was drawn from (or
  // the distribution used as the uncertainty signal for greedy learners).
  // Throws std::invalid_argument on a feature-dimension mismatch.
  virtual ActResult act(const Observation& obs, RngStream& rng) = 0;

  // Learns from `reward` for `action`. The reward may already carry an
  // expert's penalty.
  virtual void update(const Observation& obs, ActionIndex action, double reward,
                      RngStream& rng) = 0;
};

// ---------------------------------------------------------------------------

class EpsilonGreedyAgent final : public Agent {
 public:
  EpsilonGreedyAgent(std::size_t k, double epsilon);

  std::size_t num_actions() const override { return static_cast<std::size_t>(values_.size()); }
  std::string_view name() const override { return "epsilon_greedy"; }
  ActResult act(const Observation& obs, RngStream& rng) override;
  void update(const Observation& obs, ActionIndex action, double reward, RngStream& rng) override;

  const Vector& values() const { return values_; }
  const std::vector<std::size_t>& counts() const { return counts_; }

 private:
  double epsilon_;
  Vector values_;
  std::vector<std::size_t> counts_;
};

// UCB1 with score mean + c sqrt(2 ln t / n_a). Untried arms score +inf; the
// reported policy is softmax over the scores, which in the +inf limit is
// uniform over the untried arms.
class Ucb1Agent final : public Agent {
 public:
  Ucb1Agent(std::size_t k, double c, double temperature);

  std::size_t num_actions() const override { return means_.size(); }
  std::string_view name() const override { return "ucb1"; }
  ActResult act(const Observation& obs, RngStream& rng) override;
  void update(const Observation& obs, ActionIndex action, double reward, RngStream& rng) override;

  const std::vector<double>& means() const { return means_; }
  const std::vector<std::size_t>& counts() const { return counts_; }

 private:
  double c_;
  double temperature_;
  std::vector<double> means_;
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
};

// Disjoint LinUCB. Arm a reads x_{t,a} when the environment provides
// per-action features and the shared context otherwise. A_a^{-1} is kept
// current with Sherman-Morrison rank-one updates.
class LinUcbAgent final : public Agent {
 public:
  LinUcbAgent(std::size_t k, std::size_t dim, double alpha, double temperature);

  std::size_t num_actions() const override { return arms_.size(); }
  std::string_view name() const override { return "linucb"; }
  ActResult act(const Observation& obs, RngStream& rng) override;
  void update(const Observation& obs, ActionIndex action, double reward, RngStream& rng) override;

  std::size_t dim() const { return dim_; }
  Vector scores(const Observation& obs) const;
  Vector theta(ActionIndex arm) const;
  const Matrix& design_matrix(ActionIndex arm) const { return arms_.at(arm).a; }
  const Matrix& design_inverse(ActionIndex arm) const { return arms_.at(arm).a_inv; }
  const Vector& response(ActionIndex arm) const { return arms_.at(arm).b; }

 private:
  struct Arm {
    Matrix a;
    Matrix a_inv;
    Vector b;
  };
  std::size_t dim_;
  double alpha_;
  double temperature_;
  std::vector<Arm> arms_;
};

// A_inv <- (A + x x^T)^{-1} given A_inv = A^{-1}.
void sherman_morrison_update(Matrix& a_inv, const Vector& x);

// B ridge replicates per arm, each updated on a fair coin (Bernoulli
// bootstrap). Replicate responses start from a small Gaussian prior draw so
// that fresh replicates disagree.
class BootstrappedTsAgent final : public Agent {
 public:
  BootstrappedTsAgent(std::size_t k, std::size_t dim, std::size_t replicates, double update_prob,
                      double prior_scale, RngStream init_rng);

  std::size_t num_actions() const override { return k_; }
  std::string_view name() const override { return "bootstrapped_ts"; }
  ActResult act(const Observation& obs, RngStream& rng) override;
  void update(const Observation& obs, ActionIndex action, double reward, RngStream& rng) override;

  // Greedy vote of every replicate, smoothed by 1e-12 and renormalized.
  PolicyDistribution vote_distribution(const Observation& obs) const;

 private:
  struct Model {
    Matrix a_inv;
    Vector b;
    Vector theta;
  };
  ActionIndex greedy(std::size_t replicate, const Observation& obs) const;
  Model& model(std::size_t r, ActionIndex a) { return models_[r * k_ + a]; }
  const Model& model(std::size_t r, ActionIndex a) const { return models_[r * k_ + a]; }

  std::size_t k_;
  std::size_t dim_;
  std::size_t replicates_;
  double update_prob_;
  std::vector<Model> models_;
};

// pi(.|s) = softmax(W s / T); REINFORCE update W += lr r (e_a - pi) s^T,
// no baseline.
class SoftmaxLinearAgent final : public Agent {
 public:
  SoftmaxLinearAgent(std::size_t k, std::size_t dim, double learning_rate, double temperature);

  std::size_t num_actions() const override { return static_cast<std::size_t>(weights_.rows()); }
  std::string_view name() const override { return "softmax_linear"; }
  ActResult act(const Observation& obs, RngStream& rng) override;
  void update(const Observation& obs, ActionIndex action, double reward, RngStream& rng) override;

  PolicyDistribution policy(const Vector& context) const;
  // d log pi(a|s) / dW, a k x m matrix.
  Matrix log_prob_gradient(const Vector& context, ActionIndex action) const;
  const Matrix& weights() const { return weights_; }
  void set_weights(Matrix w);

 private:
  void check_dim(const Vector& context) const;
  double learning_rate_;
  double temperature_;
  Matrix weights_;
};

// Linear scorer with one shared theta: s_a = x_{t,a}^T theta, policy
// softmax(s), greedy action, and the regularized gradient step
//   theta <- theta + lr (r - x^T theta) x - reg theta.
// Without per-action features x_{t,a} is the block encoding e_a (x) s_t,
// so theta has k*m entries; this is never materialized.
class HybridLinearAgent final : public Agent {
 public:
  enum class Features { kPerAction, kBlock };

  HybridLinearAgent(std::size_t k, std::size_t dim, Features mode, double learning_rate,
                    double reg, double temperature, bool sample_action);

  std::size_t num_actions() const override { return k_; }
  std::string_view name() const override { return "hybrid_linear"; }
  ActResult act(const Observation& obs, RngStream& rng) override;
  void update(const Observation& obs, ActionIndex action, double reward, RngStream& rng) override;

  Vector scores(const Observation& obs) const;
  const Vector& theta() const { return theta_; }
  void set_theta(Vector theta);

 private:
  void check(const Observation& obs) const;
  std::size_t k_;
  std::size_t dim_;
  Features mode_;
  double learning_rate_;
  double reg_;
  double temperature_;
  bool sample_action_;
  Vector theta_;
};

// ---------------------------------------------------------------------------

enum class AgentKind {
  kEpsilonGreedy,
  kUcb1,
  kLinUcb,
  kBootstrappedTs,
  kSoftmaxLinear,
  kHybridLinear,
};

std::string_view to_string(AgentKind kind);
// Throws std::invalid_argument for unknown names.
AgentKind parse_agent_kind(std::string_view name);

struct AgentSpec {
  AgentKind kind = AgentKind::kHybridLinear;
  double epsilon = 0.1;
  double ucb_c = 1.0;
  double linucb_alpha = 1.0;
  double temperature = 1.0;
  std::size_t replicates = 10;
  double update_prob = 0.5;
  double prior_scale = 0.1;
  double learning_rate = 0.1;
  double reg = 0.01;
  bool sample_action = false;

  void validate() const;
};

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const Environment& env,
                                  RngStream init_rng);

}  // namespace hfb
