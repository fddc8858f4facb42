#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hfb/analysis.hpp"
#include "hfb/rng.hpp"

namespace {

hfb::RoundLog log(double optimal, double reward) {
  hfb::RoundLog l;
  l.optimal_value = optimal;
  l.true_reward = reward;
  l.feedback_reward = reward;
  return l;
}

}  // namespace

TEST(CumulativeRegret, Examples) {
  std::vector<hfb::RoundLog> optimal(50, log(0.7, 0.7));
  EXPECT_EQ(hfb::cumulative_regret(optimal), 0.0);
  std::vector<hfb::RoundLog> wrong(100, log(1.0, 0.0));
  EXPECT_EQ(hfb::cumulative_regret(wrong), 100.0);
}

TEST(CumulativeRegret, MatchesResummationAndIgnoresFeedbackReward) {
  hfb::RngStream rng(3);
  std::vector<hfb::RoundLog> logs;
  long double oracle = 0;
  for (int t = 0; t < 50; ++t) {
    const double r = rng.uniform(), opt = r + rng.uniform();
    auto l = log(opt, r);
    l.feedback_reward = r - 1.0;
    logs.push_back(l);
    oracle += static_cast<long double>(opt) - r;
  }
  EXPECT_NEAR(hfb::cumulative_regret(logs), static_cast<double>(oracle), 1e-12);
}

TEST(Summarize, CountsAndCostAdjustedReward) {
  std::vector<hfb::RoundLog> logs;
  hfb::RngStream rng(4);
  double reward = 0.0;
  int ar = 0, rm = 0;
  for (int t = 0; t < 40; ++t) {
    auto l = log(1.0, rng.uniform());
    l.t = t;
    if (t % 4 == 0) {
      l.feedback.kind = hfb::FeedbackKind::kAR;
      ++ar;
    } else if (t % 5 == 0) {
      l.feedback.kind = hfb::FeedbackKind::kRM;
      ++rm;
    }
    reward += l.true_reward;
    logs.push_back(l);
  }
  const hfb::CostModel cost{0.5, 0.25, 0.25};
  const auto s = hfb::summarize(logs, cost);
  EXPECT_EQ(s.rounds, 40u);
  EXPECT_EQ(s.ar_count, static_cast<std::uint64_t>(ar));
  EXPECT_EQ(s.rm_count, static_cast<std::uint64_t>(rm));
  EXPECT_DOUBLE_EQ(s.feedback_fraction, (ar + rm) / 40.0);
  EXPECT_NEAR(s.cumulative_reward, reward, 1e-12);
  EXPECT_NEAR(s.cost_adjusted_reward, reward - (ar + rm) * 1.0, 1e-12);
}

TEST(UpperBound, Examples) {
  hfb::BoundParams bp;
  bp.p = 1.0;
  bp.q = 1.0;
  EXPECT_EQ(hfb::upper_bound(bp), 0.0);
  bp.p = 0.0;
  EXPECT_DOUBLE_EQ(hfb::upper_bound(bp), std::sqrt(1000.0 * 10.0 * std::log(1000.0)));
  bp.p = 0.3;
  bp.q = 0.8;
  // 40-digit evaluation of the closed form.
  EXPECT_NEAR(hfb::upper_bound(bp), 228.33756582150375848, 1e-10);
  bp.horizon = 1.0;
  EXPECT_THROW(hfb::upper_bound(bp), std::invalid_argument);
}

TEST(UpperBound, NonIncreasingInQ) {
  for (double p : {0.0, 0.1, 0.5, 1.0}) {
    double prev = INFINITY;
    for (int i = 0; i <= 10; ++i) {
      hfb::BoundParams bp;
      bp.p = p;
      bp.q = i / 10.0;
      const double v = hfb::upper_bound(bp);
      EXPECT_LE(v, prev);
      if (p == 1.0) {
        EXPECT_NEAR(v, 1000.0 * (1 - bp.q) / ((1 - bp.q) + std::log(1000.0)), 1e-9);
      }
      prev = v;
    }
  }
}

TEST(LowerBounds, Examples) {
  EXPECT_DOUBLE_EQ(hfb::lower_bound_ar(1000, 10, 0.0, 0.5), std::sqrt(10000.0));
  EXPECT_DOUBLE_EQ(hfb::lower_bound_rm(1000, 10, 1.0, 1.0), 1000.0);
  EXPECT_THROW(hfb::lower_bound_ar(1000, 10, 0.3, 0.0), std::invalid_argument);
  EXPECT_THROW(hfb::lower_bound_rm(1000, 10, 0.3, 0.0), std::invalid_argument);
}

TEST(LowerBounds, BetterExpertGivesLowerBoundAndStrictlyDecreases) {
  for (double p : {0.1, 0.5, 1.0}) {
    for (int i = 1; i <= 10; ++i) {
      for (int j = 1; j < i; ++j) {
        EXPECT_LT(hfb::lower_bound_ar(1000, 10, p, i / 10.0), hfb::lower_bound_rm(1000, 10, p, j / 10.0));
        EXPECT_LT(hfb::lower_bound_ar(1000, 10, p, i / 10.0), hfb::lower_bound_ar(1000, 10, p, j / 10.0));
      }
    }
  }
}

TEST(Aggregate, Examples) {
  hfb::RunSummary a;
  a.cumulative_regret = 10;
  EXPECT_EQ(hfb::aggregate(std::vector{a}).cumulative_regret.std, 0.0);
  EXPECT_EQ(hfb::aggregate(std::vector{a}).cumulative_regret.mean, 10.0);
  hfb::RunSummary b;
  b.cumulative_regret = 14;
  auto agg = hfb::aggregate(std::vector{a, b});
  EXPECT_EQ(agg.cumulative_regret.mean, 12.0);
  EXPECT_NEAR(agg.cumulative_regret.std, 2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_THROW(hfb::aggregate(std::vector<hfb::RunSummary>{}), std::invalid_argument);
}

TEST(Aggregate, MatchesTwoPassOracle) {
  hfb::RngStream rng(6);
  std::vector<hfb::RunSummary> runs(5);
  for (auto& r : runs) {
    r.cumulative_regret = 100 * rng.uniform();
    r.feedback_fraction = rng.uniform();
  }
  double mean = 0;
  for (auto& r : runs) mean += r.cumulative_regret;
  mean /= 5;
  double ss = 0;
  for (auto& r : runs) ss += (r.cumulative_regret - mean) * (r.cumulative_regret - mean);
  auto agg = hfb::aggregate(runs);
  EXPECT_NEAR(agg.cumulative_regret.mean, mean, 1e-12);
  EXPECT_NEAR(agg.cumulative_regret.std, std::sqrt(ss / 4), 1e-12);
  EXPECT_EQ(agg.runs, 5u);
}

TEST(Aggregate, DuplicatedRunsHaveZeroSpread) {
  hfb::RunSummary r;
  r.cumulative_regret = 3.25;
  r.ar_count = 7;
  auto agg = hfb::aggregate(std::vector<hfb::RunSummary>(4, r));
  EXPECT_EQ(agg.cumulative_regret.mean, 3.25);
  EXPECT_EQ(agg.cumulative_regret.std, 0.0);
  EXPECT_EQ(agg.ar_count.mean, 7.0);
}
