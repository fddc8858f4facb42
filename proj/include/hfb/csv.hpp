#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hfb/analysis.hpp"
#include "hfb/config.hpp"

namespace hfb {

inline constexpr const char* kRoundCsvHeader =
    "t,action,true_reward,feedback_reward,optimal_value,entropy,feedback_kind,expert_correct";
inline constexpr const char* kSummaryCsvHeader =
    "env,agent,gate,feedback_type,lambda,q,run,cum_regret,cum_reward,feedback_fraction,ar_count,"
    "rm_count,cost_adjusted_reward";
inline constexpr const char* kGridCsvHeader =
    "lambda,q,feedback_type,mean_regret,std_regret,feedback_fraction";

struct SummaryRow {
  std::string env;
  std::string agent;
  std::string gate;
  std::string feedback_type;
  std::optional<double> lambda;  // empty cell unless the gate is a fixed threshold
  double q = 0.0;
  std::uint64_t run = 0;
  RunSummary summary;
};

SummaryRow make_summary_row(const ExperimentConfig& cfg, std::uint64_t run, const RunSummary& s);

// Floats are written with %.9g, lines end in LF. Both writers go through a
// temp file and rename.
std::string round_csv(std::span<const RoundLog> logs);
std::string summary_csv(std::span<const SummaryRow> rows);
void write_round_csv(const std::filesystem::path& path, std::span<const RoundLog> logs);
void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows);

// Readers for the two schemas above. Throw ParseError with the line number.
std::vector<RoundLog> read_round_csv(const std::filesystem::path& path);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);
std::vector<SummaryRow> parse_summary_csv(const std::string& text, const std::string& source);

}  // namespace hfb
