#include "hfb/environments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace hfb {

double RoundData::optimal_value() const {
  return rewards.size() == 0 ? 0.0 : rewards.values.maxCoeff();
}

void SyntheticEnvParams::validate() const {
  if (d == 0) throw std::invalid_argument("env.d must be >= 1");
  if (k == 0) throw std::invalid_argument("env.k must be >= 1");
  if (static_cast<std::size_t>(theta_star.size()) != d) {
    throw std::invalid_argument("env.theta_star has length " +
                                std::to_string(theta_star.size()) + ", expected d=" +
                                std::to_string(d));
  }
  if (!theta_star.allFinite()) throw std::invalid_argument("env.theta_star is not finite");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw std::invalid_argument("env.noise_sigma must be >= 0");
  }
  if (!(sparsity_rho >= 0.0 && sparsity_rho <= 1.0)) {
    throw std::invalid_argument("env.sparsity_rho must lie in [0,1]");
  }
}

Vector SyntheticEnvParams::default_theta(std::size_t d, std::uint64_t seed) {
  RngStream rng = RngStream(seed).derive(0x7468657461ULL);
  Vector theta(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = rng.normal();
  const double norm = theta.norm();
  if (norm > 0.0) theta /= norm;
  return theta;
}

double synthetic_mean_reward(const Vector& x, const SyntheticEnvParams& params, bool keep) {
  if (!keep) return 0.0;
  double v = x.dot(params.theta_star);
  if (params.nonlinear) v = std::tanh(v);
  return std::clamp((v + 1.0) / 2.0, 0.0, 1.0);
}

SyntheticRound synthetic_round(const SyntheticEnvParams& params, RngStream& rng) {
  const auto k = params.k;
  const auto d = static_cast<Eigen::Index>(params.d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(params.d));

  SyntheticRound out;
  auto& rd = out.data;
  rd.action_features.reserve(k);
  for (std::size_t a = 0; a < k; ++a) {
    Vector x(d);
    for (Eigen::Index i = 0; i < d; ++i) x(i) = rng.normal() * scale;
    rd.action_features.push_back(std::move(x));
  }
  std::vector<double> noise(k);
  for (auto& e : noise) e = rng.normal() * params.noise_sigma;
  out.keep_mask.resize(k);
  for (std::size_t a = 0; a < k; ++a) out.keep_mask[a] = rng.bernoulli(params.sparsity_rho);

  rd.rewards.kind = RewardKind::kContinuous;
  rd.rewards.values.resize(static_cast<Eigen::Index>(k));
  for (std::size_t a = 0; a < k; ++a) {
    double reward = 0.0;
    if (out.keep_mask[a]) {
      double v = rd.action_features[a].dot(params.theta_star);
      if (params.nonlinear) v = std::tanh(v);
      v += noise[a];
      reward = std::clamp((v + 1.0) / 2.0, 0.0, 1.0);
    }
    rd.rewards.values(static_cast<Eigen::Index>(a)) = reward;
  }

  rd.context.features = Vector::Zero(d);
  for (const auto& x : rd.action_features) rd.context.features += x;
  rd.context.features /= static_cast<double>(k);

  rd.correct_actions = {synthetic_optimal_action(rd.action_features, params, out.keep_mask)};
  return out;
}

ActionIndex synthetic_optimal_action(const std::vector<Vector>& action_features,
                                     const SyntheticEnvParams& params,
                                     const std::vector<bool>& keep_mask) {
  std::vector<double> means(action_features.size());
  for (std::size_t a = 0; a < action_features.size(); ++a) {
    const bool keep = keep_mask.empty() || keep_mask[a];
    means[a] = synthetic_mean_reward(action_features[a], params, keep);
  }
  return argmax_tiebreak(means);
}

std::vector<std::size_t> shuffle_order(std::size_t n, RngStream& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

RoundData dataset_round(const MultiLabelDataset& ds, const std::vector<std::size_t>& order,
                        std::size_t t) {
  if (t >= order.size() || t >= ds.size()) {
    throw std::invalid_argument("dataset round " + std::to_string(t) + " out of range (n=" +
                                std::to_string(ds.size()) + ")");
  }
  const std::size_t idx = order[t];
  if (idx >= ds.size()) {
    throw std::invalid_argument("permutation entry " + std::to_string(idx) + " out of range");
  }
  const Instance& inst = ds.rows[idx];
  RoundData rd;
  rd.context.features = densify(inst, ds.num_features);
  rd.rewards.kind = RewardKind::kBinary;
  rd.rewards.values = Vector::Zero(static_cast<Eigen::Index>(ds.num_labels));
  for (auto l : inst.labels) rd.rewards.values(static_cast<Eigen::Index>(l)) = 1.0;
  rd.correct_actions = inst.labels;
  std::sort(rd.correct_actions.begin(), rd.correct_actions.end());
  rd.correct_actions.erase(std::unique(rd.correct_actions.begin(), rd.correct_actions.end()),
                           rd.correct_actions.end());
  return rd;
}

SyntheticEnvironment::SyntheticEnvironment(SyntheticEnvParams params, RngStream stream)
    : params_(std::move(params)), stream_(stream) {
  params_.validate();
}

RoundData SyntheticEnvironment::round(std::uint64_t t) {
  RngStream rng = stream_.derive(t);
  return synthetic_round(params_, rng).data;
}

DatasetEnvironment::DatasetEnvironment(std::shared_ptr<const MultiLabelDataset> ds,
                                       RngStream stream)
    : ds_(std::move(ds)), stream_(stream) {
  if (!ds_ || ds_->size() == 0) throw std::invalid_argument("dataset environment needs instances");
}

RoundData DatasetEnvironment::round(std::uint64_t t) {
  const std::uint64_t n = ds_->size();
  const std::uint64_t epoch = t / n;
  if (epoch != epoch_) {
    RngStream rng = stream_.derive(epoch);
    order_ = shuffle_order(ds_->size(), rng);
    epoch_ = epoch;
  }
  return dataset_round(*ds_, order_, static_cast<std::size_t>(t % n));
}

}  // namespace hfb
