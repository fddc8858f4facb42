#include "hfb/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace hfb {

std::string_view to_string(FeedbackKind kind) {
  switch (kind) {
    case FeedbackKind::kNone: return "none";
    case FeedbackKind::kAR: return "AR";
    case FeedbackKind::kRM: return "RM";
  }
  return "none";
}

void ExpertConfig::validate() const {
  if (!(quality >= 0.0 && quality <= 1.0)) {
    throw std::invalid_argument("expert.quality must lie in [0,1]");
  }
  if (!std::isfinite(rm_penalty)) throw std::invalid_argument("expert.penalty must be finite");
}

Recommendation expert_ar(const std::vector<ActionIndex>& correct, const ExpertConfig& cfg,
                         std::size_t k, RngStream& rng) {
  if (k == 0) throw std::invalid_argument("expert_ar: k must be >= 1");
  const bool truthful = rng.uniform() < cfg.quality;
  if (truthful && !correct.empty()) {
    if (cfg.mode == RecommendMode::kFullLabelSet) return {correct, true};
    return {{correct[rng.uniform_index(correct.size())]}, true};
  }
  return {{static_cast<ActionIndex>(rng.uniform_index(k))}, false};
}

ActionIndex apply_ar(ActionIndex, const std::vector<ActionIndex>& recommended, RngStream& rng) {
  if (recommended.empty()) throw std::invalid_argument("apply_ar: empty recommendation");
  return recommended[rng.uniform_index(recommended.size())];
}

Penalty expert_rm(ActionIndex chosen, const std::vector<ActionIndex>& correct,
                  const ExpertConfig& cfg, RngStream& rng) {
  const bool truthful = rng.uniform() < cfg.quality;
  const bool recommended = std::find(correct.begin(), correct.end(), chosen) != correct.end();
  const bool penalize = truthful ? !recommended : recommended;
  return {penalize ? cfg.rm_penalty : 0.0, truthful};
}

double HybridDynamicGate::threshold(std::uint64_t t) const {
  return tau_init + (static_cast<double>(t) / static_cast<double>(horizon)) * (tau_max - tau_init);
}

void validate(const GatePolicy& gate) {
  std::visit(
      [](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, FixedEntropyGate>) {
          if (!(g.lambda >= 0.0)) throw std::invalid_argument("gate.lambda must be >= 0");
        } else if constexpr (std::is_same_v<G, PeriodicGate>) {
          if (g.every < 1) throw std::invalid_argument("gate.every must be >= 1");
        } else if constexpr (std::is_same_v<G, HybridDynamicGate>) {
          if (!(g.tau_init <= g.tau_max)) {
            throw std::invalid_argument("gate.tau_init must not exceed gate.tau_max");
          }
          if (g.horizon < 1) throw std::invalid_argument("gate.T must be >= 1");
        }
      },
      gate);
}

std::string gate_name(const GatePolicy& gate) {
  return std::visit(
      [](const auto& g) -> std::string {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, FixedEntropyGate>) return "fixed_entropy";
        else if constexpr (std::is_same_v<G, PeriodicGate>) return "periodic";
        else if constexpr (std::is_same_v<G, HybridDynamicGate>) return "hybrid_dynamic";
        else if constexpr (std::is_same_v<G, AlwaysGate>) return "always";
        else return "never";
      },
      gate);
}

GateDecision gate_decide(const GatePolicy& gate, double entropy_value, std::uint64_t t,
                         GateMode mode, FeedbackKind single_type) {
  if (std::holds_alternative<NeverGate>(gate)) return GateDecision::kNoFeedback;
  const bool fires = std::visit(
      [&](const auto& g) -> bool {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, FixedEntropyGate>) return entropy_value > g.lambda;
        else if constexpr (std::is_same_v<G, PeriodicGate>) return t % g.every == 0;
        else if constexpr (std::is_same_v<G, HybridDynamicGate>) return entropy_value > g.threshold(t);
        else return true;
      },
      gate);
  if (mode == GateMode::kHybrid) return fires ? GateDecision::kRequestAR : GateDecision::kRequestRM;
  if (!fires || single_type == FeedbackKind::kNone) return GateDecision::kNoFeedback;
  return single_type == FeedbackKind::kAR ? GateDecision::kRequestAR : GateDecision::kRequestRM;
}

void CostModel::validate() const {
  if (!(c_human >= 0.0)) throw std::invalid_argument("cost.human must be >= 0");
  if (!(c_system >= 0.0)) throw std::invalid_argument("cost.system must be >= 0");
  if (!(c_opportunity >= 0.0)) throw std::invalid_argument("cost.opportunity must be >= 0");
}

double total_cost(const CostModel& model, std::uint64_t feedback_count) {
  return static_cast<double>(feedback_count) * model.per_query();
}

}  // namespace hfb
