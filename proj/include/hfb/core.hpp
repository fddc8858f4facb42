#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hfb/rng.hpp"

namespace hfb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Index of an action in [0, k).
using ActionIndex = std::size_t;

struct Context {
  Vector features;
};

enum class RewardKind { kBinary, kContinuous };

struct RewardVector {
  Vector values;
  RewardKind kind = RewardKind::kContinuous;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  double operator[](ActionIndex a) const { return values(static_cast<Eigen::Index>(a)); }

  // True when every entry respects the range of `kind`.
  bool valid() const;
};

// A probability vector over k actions. Construction validates the simplex
// constraints (non-negative entries summing to 1 within 1e-9).
class PolicyDistribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit PolicyDistribution(Vector probs);

  static PolicyDistribution uniform(std::size_t k);
  static PolicyDistribution one_hot(std::size_t k, ActionIndex a);

  const Vector& probs() const { return probs_; }
  std::size_t size() const { return static_cast<std::size_t>(probs_.size()); }
  double operator[](ActionIndex a) const { return probs_(static_cast<Eigen::Index>(a)); }

 private:
  Vector probs_;
};

// exp(s_i / T) / sum_j exp(s_j / T), evaluated after subtracting max(s).
// Throws std::invalid_argument for empty input, non-finite scores or
// temperature <= 0. A score of +inf is also rejected.
PolicyDistribution softmax(const Vector& scores, double temperature = 1.0);

// Shannon entropy in nats with 0 ln 0 = 0.
double entropy(const PolicyDistribution& policy);

// Inverse-CDF draw from a single uniform.
ActionIndex sample(const PolicyDistribution& policy, RngStream& rng);

// Smallest index attaining the maximum.
ActionIndex argmax_tiebreak(std::span<const double> values);
ActionIndex argmax_tiebreak(const Vector& values);

}  // namespace hfb
