#include "hfb/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hfb {

bool RewardVector::valid() const {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values(i);
    if (kind == RewardKind::kBinary) {
      if (v != 0.0 && v != 1.0) return false;
    } else if (!(v >= 0.0 && v <= 1.0)) {
      return false;
    }
  }
  return true;
}

PolicyDistribution::PolicyDistribution(Vector probs) : probs_(std::move(probs)) {
  if (probs_.size() == 0) {
    throw std::invalid_argument("policy distribution must be non-empty");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (!(probs_(i) >= 0.0) || !std::isfinite(probs_(i))) {
      throw std::invalid_argument("policy entry " + std::to_string(i) +
                                  " is negative or not finite");
    }
    sum += probs_(i);
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("policy entries sum to " + std::to_string(sum));
  }
}

PolicyDistribution PolicyDistribution::uniform(std::size_t k) {
  return PolicyDistribution(
      Vector::Constant(static_cast<Eigen::Index>(k), 1.0 / static_cast<double>(k)));
}

PolicyDistribution PolicyDistribution::one_hot(std::size_t k, ActionIndex a) {
  Vector p = Vector::Zero(static_cast<Eigen::Index>(k));
  p(static_cast<Eigen::Index>(a)) = 1.0;
  return PolicyDistribution(std::move(p));
}

PolicyDistribution softmax(const Vector& scores, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("softmax temperature must be positive and finite");
  }
  if (scores.size() == 0) {
    throw std::invalid_argument("softmax of an empty score vector");
  }
  if (!scores.allFinite()) {
    throw std::invalid_argument("softmax scores must be finite");
  }
  const double top = scores.maxCoeff();
  Vector e = ((scores.array() - top) / temperature).exp().matrix();
  e /= e.sum();
  return PolicyDistribution(std::move(e));
}

double entropy(const PolicyDistribution& policy) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < policy.probs().size(); ++i) {
    const double p = policy.probs()(i);
    if (p > 0.0) h -= p * std::log(p);
  }
  // Rounding can push a one-hot policy to -0 or a uniform one past ln k.
  const double ceiling = std::log(static_cast<double>(policy.size()));
  if (h < 0.0) h = 0.0;
  if (h > ceiling) h = ceiling;
  return h;
}

ActionIndex sample(const PolicyDistribution& policy, RngStream& rng) {
  const double u = rng.uniform();
  double cdf = 0.0;
  const auto& p = policy.probs();
  ActionIndex last_positive = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 0.0) continue;
    last_positive = static_cast<ActionIndex>(i);
    cdf += p(i);
    if (u < cdf) return last_positive;
  }
  // u landed in the rounding gap above the accumulated sum.
  return last_positive;
}

ActionIndex argmax_tiebreak(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("argmax of an empty vector");
  }
  ActionIndex best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

ActionIndex argmax_tiebreak(const Vector& values) {
  return argmax_tiebreak(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

}  // namespace hfb
