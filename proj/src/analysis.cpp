#include "hfb/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace hfb {

double cumulative_regret(std::span<const RoundLog> logs) {
  double total = 0.0;
  for (const auto& r : logs) total += r.optimal_value - r.true_reward;
  return total;
}

RunSummary summarize(std::span<const RoundLog> logs, const CostModel& cost) {
  RunSummary s;
  s.rounds = logs.size();
  for (const auto& r : logs) {
    s.cumulative_reward += r.true_reward;
    if (r.feedback.kind == FeedbackKind::kAR) ++s.ar_count;
    if (r.feedback.kind == FeedbackKind::kRM) ++s.rm_count;
  }
  s.cumulative_regret = cumulative_regret(logs);
  const std::uint64_t queries = s.ar_count + s.rm_count;
  s.feedback_fraction = logs.empty() ? 0.0 : static_cast<double>(queries) / static_cast<double>(logs.size());
  s.cost_adjusted_reward = s.cumulative_reward - total_cost(cost, queries);
  return s;
}

double upper_bound(const BoundParams& bp) {
  if (!(bp.horizon >= 2.0)) throw std::invalid_argument("upper_bound: T must be >= 2");
  if (!(bp.p >= 0.0 && bp.p <= 1.0) || !(bp.q >= 0.0 && bp.q <= 1.0)) {
    throw std::invalid_argument("upper_bound: p and q must lie in [0,1]");
  }
  const double log_t = std::log(bp.horizon);
  const double explore = bp.c1 * std::sqrt((1.0 - bp.p) * bp.horizon * bp.num_actions * log_t);
  const double wrong = 1.0 - bp.q;
  const double feedback = bp.c2 * (bp.p * bp.horizon * wrong) / (wrong + log_t);
  return explore + feedback;
}

namespace {

double lower_bound(double horizon, double num_actions, double p, double q, double c1, double c2) {
  if (!(q > 0.0)) throw std::invalid_argument("lower bound: feedback quality must be > 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("lower bound: p must lie in [0,1]");
  return c1 * (1.0 - p) * std::sqrt(horizon * num_actions) + c2 * p * horizon / q;
}

}  // namespace

double lower_bound_ar(double horizon, double num_actions, double p, double q_ar, double c1,
                      double c2) {
  return lower_bound(horizon, num_actions, p, q_ar, c1, c2);
}

double lower_bound_rm(double horizon, double num_actions, double p, double q_rm, double c1,
                      double c2) {
  return lower_bound(horizon, num_actions, p, q_rm, c1, c2);
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean_std: no values");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

AggregateSummary aggregate(std::span<const RunSummary> runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
  auto metric = [&](auto field) {
    std::vector<double> v;
    v.reserve(runs.size());
    for (const auto& r : runs) v.push_back(static_cast<double>(r.*field));
    return mean_std(v);
  };
  AggregateSummary a;
  a.runs = runs.size();
  a.cumulative_regret = metric(&RunSummary::cumulative_regret);
  a.cumulative_reward = metric(&RunSummary::cumulative_reward);
  a.feedback_fraction = metric(&RunSummary::feedback_fraction);
  a.ar_count = metric(&RunSummary::ar_count);
  a.rm_count = metric(&RunSummary::rm_count);
  a.cost_adjusted_reward = metric(&RunSummary::cost_adjusted_reward);
  return a;
}

}  // namespace hfb
