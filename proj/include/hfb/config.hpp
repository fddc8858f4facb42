#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hfb/agents.hpp"
#include "hfb/environments.hpp"
#include "hfb/feedback.hpp"

namespace hfb {

// A configuration problem; `field` is the dotted path of the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct EnvSpec {
  enum class Kind { kSynthetic, kDataset };
  Kind kind = Kind::kSynthetic;
  std::string name = "synthetic";
  SyntheticEnvParams synthetic;
  std::filesystem::path dataset_path;
};

// Which feedback the gate requests: a single type, or AR/RM switching.
enum class FeedbackType { kAR, kRM, kHybrid };
std::string_view to_string(FeedbackType type);

struct ExperimentConfig {
  EnvSpec env;
  AgentSpec agent;
  GatePolicy gate = NeverGate{};
  FeedbackType feedback_type = FeedbackType::kAR;
  ExpertConfig expert;
  std::uint64_t rounds = 1000;
  std::uint64_t runs = 5;
  std::uint64_t seed = 0;
  CostModel cost;
  std::filesystem::path out_dir = "out";

  GateMode gate_mode() const {
    return feedback_type == FeedbackType::kHybrid ? GateMode::kHybrid : GateMode::kSingleType;
  }
  FeedbackKind single_type() const {
    return feedback_type == FeedbackType::kRM ? FeedbackKind::kRM : FeedbackKind::kAR;
  }
  // Gate lambda when the gate is a fixed entropy threshold.
  std::optional<double> gate_lambda() const;

  // Throws ConfigError naming the first invalid field.
  void validate() const;
};

// Relative dataset paths resolve against `base_dir`. Missing keys take the
// defaults above (T=1000, 5 runs, epsilon 0.1, tau 0.5 -> 1.5, lr 0.1,
// reg 0.01). Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Fully resolved echo: every default spelled out, dataset path absolute.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Entropy-threshold lists per corpus: "bibtex", "mediamill", "delicious",
// "yahoo", and "all" (sorted union). Throws std::invalid_argument.
std::vector<double> lambda_preset(std::string_view name);

}  // namespace hfb
