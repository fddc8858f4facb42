#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "hfb/agents.hpp"
#include "hfb/environments.hpp"

namespace {

using hfb::Matrix;
using hfb::Vector;

struct Obs {
  hfb::Context context;
  std::vector<Vector> features;
  hfb::Observation view() const { return {context, features}; }
};

Obs shared_context(Vector s) { return {{std::move(s)}, {}}; }

Obs per_action(std::vector<Vector> xs) {
  Vector mean = Vector::Zero(xs.front().size());
  for (const auto& x : xs) mean += x / static_cast<double>(xs.size());
  return {{mean}, std::move(xs)};
}

Vector random_vector(hfb::RngStream& rng, std::size_t d, double scale = 1.0) {
  Vector v(static_cast<Eigen::Index>(d));
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

void expect_valid(const hfb::ActResult& r, std::size_t k) {
  ASSERT_EQ(r.policy.size(), k);
  EXPECT_NEAR(r.policy.probs().sum(), 1.0, 1e-9);
  EXPECT_LT(r.action, k);
  EXPECT_GT(r.policy[r.action], 0.0);
}

}  // namespace

TEST(HybridLinear, FreshAgentIsUniformAndPicksZero) {
  hfb::HybridLinearAgent agent(4, 3, hfb::HybridLinearAgent::Features::kPerAction, 0.1, 0.01, 1.0,
                               false);
  hfb::RngStream rng(1);
  auto obs = per_action({Vector::Ones(3), Vector::Zero(3), -Vector::Ones(3), Vector::Ones(3)});
  auto r = agent.act(obs.view(), rng);
  EXPECT_EQ(r.action, 0u);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_DOUBLE_EQ(r.policy[a], 0.25);
}

TEST(HybridLinear, UpdateRuleExamples) {
  hfb::RngStream rng(1);
  hfb::HybridLinearAgent agent(2, 3, hfb::HybridLinearAgent::Features::kPerAction, 0.1, 0.01, 1.0,
                               false);
  auto e1 = Vector::Unit(3, 0);
  auto obs = per_action({e1, Vector::Zero(3)});
  agent.update(obs.view(), 0, 1.0, rng);
  EXPECT_LT((agent.theta() - 0.1 * e1).norm(), 1e-15);

  agent.set_theta(e1);
  agent.update(obs.view(), 1, 0.7, rng);  // x = 0
  EXPECT_LT((agent.theta() - 0.99 * e1).norm(), 1e-15);
}

TEST(HybridLinear, GeneralUpdateMatchesFormula) {
  hfb::RngStream rng(3);
  hfb::HybridLinearAgent agent(3, 4, hfb::HybridLinearAgent::Features::kPerAction, 0.2, 0.05, 1.0,
                               false);
  Vector theta = random_vector(rng, 4);
  agent.set_theta(theta);
  auto obs = per_action({random_vector(rng, 4), random_vector(rng, 4), random_vector(rng, 4)});
  const Vector& x = obs.features[2];
  const Vector want = theta + 0.2 * (0.3 - x.dot(theta)) * x - 0.05 * theta;
  agent.update(obs.view(), 2, 0.3, rng);
  EXPECT_LT((agent.theta() - want).norm(), 1e-14);
}

TEST(HybridLinear, BlockModeMatchesExplicitEncoding) {
  // theta has k*m entries; s_a = <theta block a, s>.
  hfb::RngStream rng(5);
  const std::size_t k = 3, m = 4;
  hfb::HybridLinearAgent agent(k, m, hfb::HybridLinearAgent::Features::kBlock, 0.1, 0.01, 1.0,
                               false);
  Vector theta = random_vector(rng, k * m);
  agent.set_theta(theta);
  auto obs = shared_context(random_vector(rng, m));
  auto scores = agent.scores(obs.view());
  for (std::size_t a = 0; a < k; ++a) {
    Vector x = Vector::Zero(k * m);
    x.segment(a * m, m) = obs.context.features;
    EXPECT_NEAR(scores(a), x.dot(theta), 1e-14);
  }
  Vector x1 = Vector::Zero(k * m);
  x1.segment(m, m) = obs.context.features;
  const Vector want = theta + 0.1 * (1.0 - x1.dot(theta)) * x1 - 0.01 * theta;
  agent.update(obs.view(), 1, 1.0, rng);
  EXPECT_LT((agent.theta() - want).norm(), 1e-14);
}

TEST(HybridLinearProperty, ArgmaxOfPolicyEqualsArgmaxOfScores) {
  hfb::RngStream rng(7);
  hfb::HybridLinearAgent agent(6, 5, hfb::HybridLinearAgent::Features::kPerAction, 0.1, 0.01, 1.0,
                               false);
  for (int trial = 0; trial < 300; ++trial) {
    agent.set_theta(random_vector(rng, 5, 3.0));
    std::vector<Vector> xs;
    for (int a = 0; a < 6; ++a) xs.push_back(random_vector(rng, 5));
    auto obs = per_action(xs);
    auto r = agent.act(obs.view(), rng);
    EXPECT_EQ(r.action, hfb::argmax_tiebreak(agent.scores(obs.view())));
    EXPECT_EQ(r.action, hfb::argmax_tiebreak(r.policy.probs()));
  }
}

TEST(EpsilonGreedy, GreedyWithZeroEpsilon) {
  hfb::EpsilonGreedyAgent agent(3, 0.0);
  hfb::RngStream rng(1);
  auto obs = shared_context(Vector::Zero(1));
  agent.update(obs.view(), 1, 1.0, rng);
  EXPECT_EQ(agent.values(), (Vector(3) << 0, 1, 0).finished());
  auto r = agent.act(obs.view(), rng);
  EXPECT_EQ(r.action, 1u);
  EXPECT_EQ(r.policy.probs(), (Vector(3) << 0, 1, 0).finished());
}

TEST(EpsilonGreedy, ReportsExactMixture) {
  hfb::EpsilonGreedyAgent agent(4, 0.2);
  hfb::RngStream rng(2);
  auto obs = shared_context(Vector::Zero(1));
  agent.update(obs.view(), 2, 1.0, rng);
  auto r = agent.act(obs.view(), rng);
  EXPECT_NEAR(r.policy[2], 0.8 + 0.05, 1e-15);
  EXPECT_NEAR(r.policy[0], 0.05, 1e-15);
}

TEST(EpsilonGreedy, IncrementalMean) {
  hfb::EpsilonGreedyAgent agent(2, 0.1);
  hfb::RngStream rng(2);
  auto obs = shared_context(Vector::Zero(1));
  for (double r : {1.0, 0.0, 0.5, 0.25}) agent.update(obs.view(), 0, r, rng);
  EXPECT_DOUBLE_EQ(agent.values()(0), 0.4375);
  EXPECT_EQ(agent.counts()[0], 4u);
}

TEST(Ucb1, TriesUntriedArmsFirstWithUniformMass) {
  hfb::Ucb1Agent agent(3, 1.0, 1.0);
  hfb::RngStream rng(1);
  auto obs = shared_context(Vector::Zero(1));
  auto r = agent.act(obs.view(), rng);
  EXPECT_EQ(r.action, 0u);
  for (std::size_t a = 0; a < 3; ++a) EXPECT_DOUBLE_EQ(r.policy[a], 1.0 / 3.0);
  agent.update(obs.view(), 0, 1.0, rng);
  r = agent.act(obs.view(), rng);
  EXPECT_EQ(r.action, 1u);
  EXPECT_EQ(r.policy[0], 0.0);
  EXPECT_DOUBLE_EQ(r.policy[1], 0.5);
}

TEST(Ucb1, ScoresFollowFormula) {
  hfb::Ucb1Agent agent(2, 0.5, 1.0);
  hfb::RngStream rng(1);
  auto obs = shared_context(Vector::Zero(1));
  agent.update(obs.view(), 0, 1.0, rng);
  agent.update(obs.view(), 1, 0.0, rng);
  agent.update(obs.view(), 1, 1.0, rng);
  Vector s(2);
  s << 1.0 + 0.5 * std::sqrt(2 * std::log(3.0) / 1), 0.5 + 0.5 * std::sqrt(2 * std::log(3.0) / 2);
  auto r = agent.act(obs.view(), rng);
  auto want = hfb::softmax(s, 1.0);
  EXPECT_EQ(r.action, 0u);
  EXPECT_NEAR(r.policy[0], want[0], 1e-14);
}

TEST(LinUcb, SymmetricFreshAgent) {
  hfb::LinUcbAgent agent(3, 2, 1.0, 1.0);
  hfb::RngStream rng(1);
  Vector x(2);
  x << 0.3, -0.4;
  auto obs = per_action({x, x, x});
  auto r = agent.act(obs.view(), rng);
  EXPECT_EQ(r.action, 0u);
  for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(r.policy[a], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(agent.theta(1), Vector::Zero(2));
}

TEST(LinUcb, SingleUpdateMatchesTwoByTwoInverse) {
  hfb::LinUcbAgent agent(2, 2, 1.0, 1.0);
  hfb::RngStream rng(1);
  auto obs = per_action({Vector::Unit(2, 0), Vector::Unit(2, 1)});
  agent.update(obs.view(), 0, 1.0, rng);
  // A = [[2,0],[0,1]], b = [1,0]; A^-1 b = [0.5, 0].
  Matrix a(2, 2);
  a << 2, 0, 0, 1;
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  Matrix inv(2, 2);
  inv << a(1, 1) / det, -a(0, 1) / det, -a(1, 0) / det, a(0, 0) / det;
  EXPECT_LT((agent.theta(0) - inv * Vector::Unit(2, 0)).norm(), 1e-15);
  EXPECT_LT((agent.design_inverse(0) - inv).norm(), 1e-15);
}

TEST(LinUcb, ThetaMatchesDenseSolve) {
  hfb::RngStream rng(9);
  hfb::LinUcbAgent a(3, 5, 0.5, 1.0), b(3, 5, 0.5, 1.0);
  hfb::RngStream rb(9);
  for (int n = 0; n < 400; ++n) {
    std::vector<Vector> xs{random_vector(rng, 5), random_vector(rng, 5), random_vector(rng, 5)};
    auto obs = per_action(xs);
    const auto arm = static_cast<hfb::ActionIndex>(rng.uniform_index(3));
    const double r = rng.uniform();
    a.update(obs.view(), arm, r, rb);
    b.update(obs.view(), arm, r, rb);
  }
  for (std::size_t arm = 0; arm < 3; ++arm) {
    const Vector dense = a.design_matrix(arm).ldlt().solve(a.response(arm));
    EXPECT_LT((a.theta(arm) - dense).norm(), 1e-8);
    EXPECT_EQ(a.theta(arm), b.theta(arm));
  }
}

TEST(LinUcb, ShermanMorrisonTracksDenseInverse) {
  hfb::RngStream rng(4);
  const std::size_t d = 8;
  Matrix a = Matrix::Identity(d, d);
  Matrix a_inv = Matrix::Identity(d, d);
  for (int i = 0; i < 1000; ++i) {
    const Vector x = random_vector(rng, d);
    a += x * x.transpose();
    hfb::sherman_morrison_update(a_inv, x);
  }
  EXPECT_LT((a_inv - a.inverse()).norm(), 1e-6);
}

TEST(LinUcb, RejectsDimensionMismatch) {
  hfb::LinUcbAgent agent(2, 3, 1.0, 1.0);
  hfb::RngStream rng(1);
  auto obs = per_action({Vector::Zero(2), Vector::Zero(2)});
  EXPECT_THROW(agent.act(obs.view(), rng), std::invalid_argument);
}

TEST(SoftmaxLinear, PolicyIsSoftmaxOfWeightsTimesContext) {
  hfb::RngStream rng(2);
  hfb::SoftmaxLinearAgent agent(4, 3, 0.1, 1.0);
  Matrix w = Matrix::Random(4, 3);
  agent.set_weights(w);
  Vector s = random_vector(rng, 3);
  auto p = agent.policy(s);
  auto want = hfb::softmax(w * s);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(p[a], want[a], 1e-15);
}

TEST(SoftmaxLinear, UpdateIsReinforceStep) {
  hfb::RngStream rng(3);
  hfb::SoftmaxLinearAgent agent(3, 2, 0.5, 1.0);
  Matrix w = Matrix::Random(3, 2);
  agent.set_weights(w);
  auto obs = shared_context(random_vector(rng, 2));
  const Vector pi = agent.policy(obs.context.features).probs();
  Matrix want = w + 0.5 * 0.8 * (Vector::Unit(3, 1) - pi) * obs.context.features.transpose();
  agent.update(obs.view(), 1, 0.8, rng);
  EXPECT_LT((agent.weights() - want).norm(), 1e-14);
}

TEST(SoftmaxLinear, GradientMatchesCentralDifferences) {
  hfb::RngStream rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng.uniform_index(6), m = 1 + rng.uniform_index(6);
    const double temp = 0.5 + rng.uniform();
    hfb::SoftmaxLinearAgent agent(k, m, 0.1, temp);
    Matrix w(k, m);
    for (auto& x : w.reshaped()) x = rng.normal();
    agent.set_weights(w);
    const Vector s = random_vector(rng, m);
    const auto a = static_cast<hfb::ActionIndex>(rng.uniform_index(k));
    const Matrix g = agent.log_prob_gradient(s, a);

    Matrix fd(k, m);
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        Matrix wp = w, wm = w;
        wp(i, j) += h;
        wm(i, j) -= h;
        agent.set_weights(wp);
        const double up = std::log(agent.policy(s)[a]);
        agent.set_weights(wm);
        const double dn = std::log(agent.policy(s)[a]);
        fd(i, j) = (up - dn) / (2 * h);
      }
    }
    EXPECT_LT((g - fd).norm() / std::max(1e-12, fd.norm()), 1e-5);
  }
}

TEST(BootstrappedTs, VoteDistributionIsValid) {
  hfb::BootstrappedTsAgent agent(5, 3, 10, 0.5, 0.1, hfb::RngStream(1));
  hfb::RngStream rng(2);
  auto obs = shared_context(Vector::Ones(3));
  auto p = agent.vote_distribution(obs.view());
  EXPECT_NEAR(p.probs().sum(), 1.0, 1e-12);
  EXPECT_TRUE((p.probs().array() > 0).all());
  auto r = agent.act(obs.view(), rng);
  expect_valid(r, 5);
}

TEST(BootstrappedTsProperty, VoteEntropyShrinksWithConsistentEvidence) {
  int shrank = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    hfb::BootstrappedTsAgent agent(4, 3, 10, 0.5, 0.1, hfb::RngStream(seed));
    hfb::RngStream rng(seed + 100);
    auto obs = shared_context((Vector(3) << 1.0, 0.5, -0.2).finished());
    const double before = hfb::entropy(agent.vote_distribution(obs.view()));
    for (int n = 0; n < 500; ++n) {
      const auto a = static_cast<hfb::ActionIndex>(n % 4);
      agent.update(obs.view(), a, a == 2 ? 1.0 : 0.0, rng);
    }
    const double after = hfb::entropy(agent.vote_distribution(obs.view()));
    if (after < before) ++shrank;
  }
  EXPECT_GT(shrank, 10);
}

TEST(UcbAndEpsilonGreedy, SublinearRegretOnTwoArmBernoulli) {
  const double p[] = {0.9, 0.1};
  auto run = [&](hfb::Agent& agent, std::uint64_t seed) {
    hfb::RngStream rng(seed), world(seed + 1);
    auto obs = shared_context(Vector::Zero(1));
    const int T = 5000;
    double tail = 0.0;
    for (int t = 0; t < T; ++t) {
      auto r = agent.act(obs.view(), rng);
      const double reward = world.bernoulli(p[r.action]) ? 1.0 : 0.0;
      if (t >= T - T / 10) tail += p[0] - p[r.action];
      agent.update(obs.view(), r.action, reward, rng);
    }
    return tail / (T / 10);
  };
  hfb::Ucb1Agent ucb(2, 1.0, 1.0);
  hfb::EpsilonGreedyAgent eg(2, 0.1);
  EXPECT_LT(run(ucb, 1), 0.15);
  EXPECT_LT(run(eg, 2), 0.15);
}

TEST(AgentProperty, EveryActReturnsValidDistribution) {
  hfb::SyntheticEnvParams params;
  params.theta_star = hfb::SyntheticEnvParams::default_theta(10, 0);
  hfb::SyntheticEnvironment env(params, hfb::RngStream(3));
  for (auto kind : {hfb::AgentKind::kEpsilonGreedy, hfb::AgentKind::kUcb1, hfb::AgentKind::kLinUcb,
                    hfb::AgentKind::kBootstrappedTs, hfb::AgentKind::kSoftmaxLinear,
                    hfb::AgentKind::kHybridLinear}) {
    hfb::AgentSpec spec;
    spec.kind = kind;
    auto agent = hfb::make_agent(spec, env, hfb::RngStream(4));
    EXPECT_EQ(agent->name(), hfb::to_string(kind));
    hfb::RngStream rng(5);
    for (std::uint64_t t = 0; t < 200; ++t) {
      auto rd = env.round(t);
      auto obs = hfb::Observation::from(rd);
      auto r = agent->act(obs, rng);
      expect_valid(r, 10);
      agent->update(obs, r.action, rd.rewards[r.action], rng);
    }
  }
}

TEST(AgentKind, NamesRoundTrip) {
  for (auto kind : {hfb::AgentKind::kEpsilonGreedy, hfb::AgentKind::kUcb1, hfb::AgentKind::kLinUcb,
                    hfb::AgentKind::kBootstrappedTs, hfb::AgentKind::kSoftmaxLinear,
                    hfb::AgentKind::kHybridLinear}) {
    EXPECT_EQ(hfb::parse_agent_kind(hfb::to_string(kind)), kind);
  }
  EXPECT_THROW(hfb::parse_agent_kind("ppo"), std::invalid_argument);
}
