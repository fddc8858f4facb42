#include "hfb/report.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "hfb/io.hpp"

namespace hfb {

ReportTable build_report(std::span<const SummaryRow> rows) {
  if (rows.empty()) throw std::invalid_argument("report: no summary rows");

  using GroupKey = std::tuple<std::string, std::string, std::string>;
  // (group, q, gate, lambda) -> (sum of regret, count)
  using CellKey = std::tuple<GroupKey, double, std::string, double, bool>;
  std::map<CellKey, std::pair<double, std::size_t>> sums;
  std::set<double> qs;
  std::set<GroupKey> groups;
  for (const auto& r : rows) {
    GroupKey g{r.env, r.agent, r.feedback_type};
    groups.insert(g);
    qs.insert(r.q);
    auto& acc = sums[CellKey{g, r.q, r.gate, r.lambda.value_or(0.0), r.lambda.has_value()}];
    acc.first += r.summary.cumulative_regret;
    ++acc.second;
  }

  ReportTable table;
  table.qs.assign(qs.begin(), qs.end());
  std::map<GroupKey, std::size_t> index;
  for (const auto& g : groups) {
    index[g] = table.rows.size();
    table.rows.push_back({std::get<0>(g), std::get<1>(g), std::get<2>(g),
                          std::vector<std::optional<double>>(table.qs.size()), 0});
  }
  for (const auto& [key, acc] : sums) {
    auto& row = table.rows[index[std::get<0>(key)]];
    const auto col = static_cast<std::size_t>(
        std::lower_bound(table.qs.begin(), table.qs.end(), std::get<1>(key)) - table.qs.begin());
    const double mean = acc.first / static_cast<double>(acc.second);
    if (!row.cells[col] || mean < *row.cells[col]) row.cells[col] = mean;
  }
  for (auto& row : table.rows) {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < row.cells.size(); ++c) {
      if (row.cells[c] && (!best || *row.cells[c] < *row.cells[*best])) best = c;
    }
    row.best = best.value_or(0);
  }
  return table;
}

std::string render_report(const ReportTable& table) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> header{"env", "agent", "feedback"};
  for (double q : table.qs) header.push_back("q=" + format_g9(q));
  lines.push_back(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> line{row.env, row.agent, row.feedback_type};
    for (std::size_t c = 0; c < row.cells.size(); ++c) {
      if (!row.cells[c]) {
        line.push_back("-");
        continue;
      }
      std::string cell = format_g9(*row.cells[c]);
      if (c == row.best) cell += '*';
      line.push_back(cell);
    }
    lines.push_back(line);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& l : lines) {
    for (std::size_t i = 0; i < l.size(); ++i) width[i] = std::max(width[i], l[i].size());
  }
  std::string out = "mean cumulative regret (* = lowest across expert quality)\n";
  for (const auto& l : lines) {
    for (std::size_t i = 0; i < l.size(); ++i) {
      out += l[i];
      if (i + 1 < l.size()) out += std::string(width[i] - l[i].size() + 2, ' ');
    }
    out += '\n';
  }
  return out;
}

}  // namespace hfb
