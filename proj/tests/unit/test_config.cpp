#include <gtest/gtest.h>
#include <json.hpp>

#include "hfb/config.hpp"
#include "hfb/io.hpp"

using nlohmann::json;

namespace {

std::string error_field(const json& j) {
  try {
    hfb::config_from_json(j);
  } catch (const hfb::ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST(Config, DefaultsFromEmptyObject) {
  auto cfg = hfb::config_from_json(json::object());
  EXPECT_EQ(cfg.rounds, 1000u);
  EXPECT_EQ(cfg.runs, 5u);
  EXPECT_EQ(cfg.agent.kind, hfb::AgentKind::kHybridLinear);
  EXPECT_EQ(cfg.agent.epsilon, 0.1);
  EXPECT_EQ(cfg.agent.learning_rate, 0.1);
  EXPECT_EQ(cfg.agent.reg, 0.01);
  EXPECT_EQ(cfg.env.synthetic.d, 10u);
  EXPECT_EQ(cfg.env.synthetic.k, 10u);
  EXPECT_EQ(cfg.env.synthetic.noise_sigma, 0.1);
  EXPECT_NEAR(cfg.env.synthetic.theta_star.norm(), 1.0, 1e-12);
  EXPECT_TRUE(std::holds_alternative<hfb::NeverGate>(cfg.gate));
}

TEST(Config, HybridGateDefaults) {
  auto cfg = hfb::config_from_json(json::parse(R"({"rounds": 400, "gate": {"type": "hybrid_dynamic"}})"));
  const auto& g = std::get<hfb::HybridDynamicGate>(cfg.gate);
  EXPECT_EQ(g.tau_init, 0.5);
  EXPECT_EQ(g.tau_max, 1.5);
  EXPECT_EQ(g.horizon, 400u);
  EXPECT_EQ(cfg.feedback_type, hfb::FeedbackType::kHybrid);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(error_field(json::parse(R"({"rounds": 0})")), "rounds");
  EXPECT_EQ(error_field(json::parse(R"({"rounds": -3})")), "rounds");
  EXPECT_EQ(error_field(json::parse(R"({"runs": "five"})")), "runs");
  EXPECT_EQ(error_field(json::parse(R"({"agent": {"type": "ppo"}})")), "agent.type");
  EXPECT_EQ(error_field(json::parse(R"({"agent": {"epsilon": 1.5}})")), "agent.epsilon");
  EXPECT_EQ(error_field(json::parse(R"({"expert": {"quality": 2}})")), "expert.quality");
  EXPECT_EQ(error_field(json::parse(R"({"gate": {"type": "fixed_entropy"}})")), "gate.lambda");
  EXPECT_EQ(error_field(json::parse(R"({"gate": {"type": "fixed_entropy", "lambda": -1}})")),
            "gate.lambda");
  EXPECT_EQ(error_field(json::parse(R"({"env": {"d": 3, "theta_star": [1, 2]}})")),
            "env.theta_star");
  EXPECT_EQ(error_field(json::parse(R"({"env": {"colour": 1}})")), "env.colour");
  EXPECT_EQ(error_field(json::parse(R"({"feedback_type": "both"})")), "feedback_type");
  EXPECT_EQ(error_field(json::parse(R"({"cost": {"human": -1}})")), "cost.human");
}

TEST(Config, EchoRoundTrips) {
  auto cfg = hfb::config_from_json(json::parse(R"({
    "env": {"type": "synthetic", "d": 4, "k": 6, "nonlinear": true, "sparsity_rho": 0.8},
    "agent": {"type": "linucb", "alpha": 0.3},
    "gate": {"type": "periodic", "every": 7},
    "feedback_type": "RM",
    "expert": {"quality": 0.65, "mode": "singleton"},
    "cost": {"human": 1.5},
    "rounds": 50, "runs": 2, "seed": 12345678901234
  })"));
  const json echo = hfb::config_to_json(cfg);
  const auto again = hfb::config_from_json(echo);
  EXPECT_EQ(hfb::config_to_json(again), echo);
  EXPECT_EQ(again.env.synthetic.theta_star, cfg.env.synthetic.theta_star);
  EXPECT_EQ(again.seed, 12345678901234u);
}

TEST(Config, DatasetPathResolvesAgainstConfigDirectory) {
  auto cfg = hfb::config_from_json(json::parse(R"({"env": {"type": "dataset", "path": "d/x.txt"}})"),
                                   "/base/dir");
  EXPECT_EQ(cfg.env.dataset_path, std::filesystem::path("/base/dir/d/x.txt"));
  EXPECT_EQ(cfg.env.name, "x");
}

TEST(Config, LambdaPresets) {
  EXPECT_EQ(hfb::lambda_preset("bibtex"), (std::vector<double>{2.5, 3.5, 5.0, 6.5, 9.0}));
  EXPECT_EQ(hfb::lambda_preset("mediamill"), (std::vector<double>{1.5, 2.5, 3.0, 4.5, 7.0}));
  EXPECT_EQ(hfb::lambda_preset("all"),
            (std::vector<double>{1.5, 2.5, 3.0, 3.5, 4.5, 5.0, 6.5, 7.0, 9.0}));
  EXPECT_THROW(hfb::lambda_preset("imagenet"), std::invalid_argument);
}

TEST(Config, MissingFileIsIoError) {
  EXPECT_THROW(hfb::load_config("/nonexistent/c.json"), hfb::IoError);
}
