#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hfb/core.hpp"
#include "hfb/rng.hpp"

namespace hfb {

enum class FeedbackKind { kNone, kAR, kRM };
std::string_view to_string(FeedbackKind kind);

// ---------------------------------------------------------------------------
// Simulated experts
// ---------------------------------------------------------------------------

enum class RecommendMode { kFullLabelSet, kSingleton };

struct ExpertConfig {
  double quality = 0.8;  // q
  double rm_penalty = -1.0;  // r_p
  RecommendMode mode = RecommendMode::kFullLabelSet;

  void validate() const;
};

struct Recommendation {
  std::vector<ActionIndex> actions;
  bool expert_correct;
};

// With probability q the correct set (or one uniformly chosen correct
// action in singleton mode); otherwise one uniformly random action. An
// empty correct set yields a random singleton flagged incorrect.
Recommendation expert_ar(const std::vector<ActionIndex>& correct, const ExpertConfig& cfg,
                         std::size_t k, RngStream& rng);

// Uniform member of `recommended`; the agent's own action is ignored.
// Throws std::invalid_argument for an empty set.
ActionIndex apply_ar(ActionIndex agent_action, const std::vector<ActionIndex>& recommended,
                     RngStream& rng);

struct Penalty {
  double reward_delta;
  bool expert_correct;
};

// With probability q: r_p iff chosen is not in `correct`. Otherwise the
// judgment is inverted: r_p iff chosen is in `correct`.
Penalty expert_rm(ActionIndex chosen, const std::vector<ActionIndex>& correct,
                  const ExpertConfig& cfg, RngStream& rng);

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

struct FixedEntropyGate {
  double lambda;
};
struct PeriodicGate {
  std::uint64_t every;
};
struct HybridDynamicGate {
  double tau_init;
  double tau_max;
  std::uint64_t horizon;  // T

  // tau_t = tau_init + (t / T) (tau_max - tau_init)
  double threshold(std::uint64_t t) const;
};
struct AlwaysGate {};
struct NeverGate {};

using GatePolicy = std::variant<FixedEntropyGate, PeriodicGate, HybridDynamicGate, AlwaysGate, NeverGate>;

void validate(const GatePolicy& gate);
std::string gate_name(const GatePolicy& gate);

enum class GateMode { kSingleType, kHybrid };

enum class GateDecision { kNoFeedback, kRequestAR, kRequestRM };

// Single-type mode: request `single_type` when the gate fires, nothing
// otherwise. Hybrid mode: request AR when the gate fires and RM otherwise
// (Never still requests nothing).
GateDecision gate_decide(const GatePolicy& gate, double entropy_value, std::uint64_t t,
                         GateMode mode, FeedbackKind single_type = FeedbackKind::kAR);

// ---------------------------------------------------------------------------
// Events and costs
// ---------------------------------------------------------------------------

struct FeedbackEvent {
  std::uint64_t round = 0;
  FeedbackKind kind = FeedbackKind::kNone;
  std::vector<ActionIndex> recommended_set;
  bool expert_correct = false;
  double reward_before = 0.0;
  double reward_after = 0.0;
};

struct CostModel {
  double c_human = 0.0;
  double c_system = 0.0;
  double c_opportunity = 0.0;

  double per_query() const { return c_human + c_system + c_opportunity; }
  void validate() const;
};

double total_cost(const CostModel& model, std::uint64_t feedback_count);

}  // namespace hfb
