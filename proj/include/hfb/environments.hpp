#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hfb/core.hpp"
#include "hfb/dataset.hpp"
#include "hfb/rng.hpp"

namespace hfb {

// One round of the world: the observation handed to the agent plus the
// ground truth used by experts and by regret accounting.
struct RoundData {
  Context context;
  RewardVector rewards;
  // Per-action feature vectors x_{t,a}; empty for environments that only
  // expose a shared context.
  std::vector<Vector> action_features;
  // Actions an expert considers correct (label set, or the noiseless
  // optimum for synthetic worlds). May be empty.
  std::vector<ActionIndex> correct_actions;

  // r_t(pi*(s_t)); recomputed from `rewards` on every call.
  double optimal_value() const;
  std::size_t num_actions() const { return rewards.size(); }
};

// ---------------------------------------------------------------------------
// Synthetic linear world
// ---------------------------------------------------------------------------

struct SyntheticEnvParams {
  Vector theta_star;           // length d
  double noise_sigma = 0.1;
  std::size_t d = 10;
  std::size_t k = 10;
  bool nonlinear = false;      // tanh on the linear mean
  double sparsity_rho = 1.0;   // probability an (round, action) slot keeps its reward
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on the first violated constraint.
  void validate() const;

  // theta* with i.i.d. standard-normal entries rescaled to unit norm, drawn
  // from `seed`.
  static Vector default_theta(std::size_t d, std::uint64_t seed);
};

struct SyntheticRound {
  RoundData data;
  std::vector<bool> keep_mask;  // sparsity mask, one flag per action
};

// Noiseless reward of feature vector x: tanh (optional) of x^T theta*, then
// the (v+1)/2 squash clamped to [0,1]; 0 when the slot is masked out.
double synthetic_mean_reward(const Vector& x, const SyntheticEnvParams& params, bool keep = true);

// Draw order: k*d feature normals, k noise normals, k mask uniforms.
SyntheticRound synthetic_round(const SyntheticEnvParams& params, RngStream& rng);

// argmax_a of the noiseless pipeline; `keep_mask` empty means all kept.
ActionIndex synthetic_optimal_action(const std::vector<Vector>& action_features,
                                     const SyntheticEnvParams& params,
                                     const std::vector<bool>& keep_mask = {});

// ---------------------------------------------------------------------------
// Multi-label dataset world
// ---------------------------------------------------------------------------

// Fisher-Yates permutation of [0, n).
std::vector<std::size_t> shuffle_order(std::size_t n, RngStream& rng);

// Reward 1 exactly on the instance's labels. Throws std::invalid_argument
// when t is outside the permutation or the permutation entry outside ds.
RoundData dataset_round(const MultiLabelDataset& ds, const std::vector<std::size_t>& order,
                        std::size_t t);

// ---------------------------------------------------------------------------
// Per-run environment handles used by the runner
// ---------------------------------------------------------------------------

class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::size_t num_actions() const = 0;
  virtual std::size_t context_dim() const = 0;
  // Dimension of x_{t,a}; 0 when the environment has none.
  virtual std::size_t action_feature_dim() const = 0;
  virtual RoundData round(std::uint64_t t) = 0;
};

class SyntheticEnvironment final : public Environment {
 public:
  // `stream` is the run's environment stream; round t draws from
  // stream.derive(t), so rounds are pure functions of (params, stream, t).
  SyntheticEnvironment(SyntheticEnvParams params, RngStream stream);

  std::size_t num_actions() const override { return params_.k; }
  std::size_t context_dim() const override { return params_.d; }
  std::size_t action_feature_dim() const override { return params_.d; }
  RoundData round(std::uint64_t t) override;

  const SyntheticEnvParams& params() const { return params_; }

 private:
  SyntheticEnvParams params_;
  RngStream stream_;
};

// Visits the corpus in a shuffled order; once all n instances are used a
// fresh permutation is drawn for the next pass.
class DatasetEnvironment final : public Environment {
 public:
  DatasetEnvironment(std::shared_ptr<const MultiLabelDataset> ds, RngStream stream);

  std::size_t num_actions() const override { return ds_->num_labels; }
  std::size_t context_dim() const override { return ds_->num_features; }
  std::size_t action_feature_dim() const override { return 0; }
  RoundData round(std::uint64_t t) override;

 private:
  std::shared_ptr<const MultiLabelDataset> ds_;
  RngStream stream_;
  std::uint64_t epoch_ = UINT64_MAX;
  std::vector<std::size_t> order_;
};

}  // namespace hfb
