#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hfb/csv.hpp"

namespace hfb {

// One line per (env, agent, feedback type); one column per expert quality.
// A cell holds the lowest mean cumulative regret over the gate settings
// (gate, lambda) that were run for it; the row minimum is marked.
struct ReportRow {
  std::string env;
  std::string agent;
  std::string feedback_type;
  std::vector<std::optional<double>> cells;  // parallel to ReportTable::qs
  std::size_t best = 0;                      // column of the row minimum
};

struct ReportTable {
  std::vector<double> qs;
  std::vector<ReportRow> rows;
};

// Throws std::invalid_argument when `rows` is empty.
ReportTable build_report(std::span<const SummaryRow> rows);
std::string render_report(const ReportTable& table);

}  // namespace hfb
