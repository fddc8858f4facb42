#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hfb/core.hpp"
#include "hfb/feedback.hpp"

namespace hfb {

struct RoundLog {
  std::uint64_t t = 0;
  ActionIndex action = 0;
  double true_reward = 0.0;      // r_t(a_t) from the environment
  double feedback_reward = 0.0;  // what the agent was updated with
  double optimal_value = 0.0;
  double entropy = 0.0;
  FeedbackEvent feedback;
};

struct RunSummary {
  std::uint64_t rounds = 0;
  double cumulative_regret = 0.0;
  double cumulative_reward = 0.0;
  double feedback_fraction = 0.0;  // (ar_count + rm_count) / T
  std::uint64_t ar_count = 0;
  std::uint64_t rm_count = 0;
  double cost_adjusted_reward = 0.0;
};

// sum_t (optimal_value_t - true_reward_t). Feedback rewards never enter.
double cumulative_regret(std::span<const RoundLog> logs);

RunSummary summarize(std::span<const RoundLog> logs, const CostModel& cost);

struct BoundParams {
  double horizon = 1000.0;  // T
  double num_actions = 10.0;  // |A|
  double p = 0.0;
  double q = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
};

// c1 sqrt((1-p) T k ln T) + c2 p T (1-q) / ((1-q) + ln T). T < 2 throws.
double upper_bound(const BoundParams& bp);

// c1 (1-p) sqrt(T k) + c2 p T / q. q == 0 throws.
double lower_bound_ar(double horizon, double num_actions, double p, double q_ar, double c1 = 1.0,
                      double c2 = 1.0);
double lower_bound_rm(double horizon, double num_actions, double p, double q_rm, double c1 = 1.0,
                      double c2 = 1.0);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample std, n-1 denominator, 0 for a single value
};

MeanStd mean_std(std::span<const double> values);

struct AggregateSummary {
  std::size_t runs = 0;
  MeanStd cumulative_regret;
  MeanStd cumulative_reward;
  MeanStd feedback_fraction;
  MeanStd ar_count;
  MeanStd rm_count;
  MeanStd cost_adjusted_reward;
};

// Throws std::invalid_argument for an empty input.
AggregateSummary aggregate(std::span<const RunSummary> runs);

}  // namespace hfb
