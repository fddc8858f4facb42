#include "hfb/csv.hpp"

#include <charconv>
#include <sstream>

#include "hfb/dataset.hpp"
#include "hfb/io.hpp"

namespace hfb {

SummaryRow make_summary_row(const ExperimentConfig& cfg, std::uint64_t run, const RunSummary& s) {
  return {cfg.env.name,
          std::string(to_string(cfg.agent.kind)),
          gate_name(cfg.gate),
          std::string(to_string(cfg.feedback_type)),
          cfg.gate_lambda(),
          cfg.expert.quality,
          run,
          s};
}

std::string round_csv(std::span<const RoundLog> logs) {
  std::string out = kRoundCsvHeader;
  out += '\n';
  for (const auto& r : logs) {
    out += std::to_string(r.t);
    out += ',';
    out += std::to_string(r.action);
    out += ',';
    out += format_g9(r.true_reward);
    out += ',';
    out += format_g9(r.feedback_reward);
    out += ',';
    out += format_g9(r.optimal_value);
    out += ',';
    out += format_g9(r.entropy);
    out += ',';
    out += to_string(r.feedback.kind);
    out += ',';
    out += r.feedback.expert_correct ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  std::string out = kSummaryCsvHeader;
  out += '\n';
  for (const auto& row : rows) {
    const auto& s = row.summary;
    out += row.env + ',' + row.agent + ',' + row.gate + ',' + row.feedback_type + ',';
    if (row.lambda) out += format_g9(*row.lambda);
    out += ',' + format_g9(row.q) + ',' + std::to_string(row.run) + ',';
    out += format_g9(s.cumulative_regret) + ',' + format_g9(s.cumulative_reward) + ',' +
           format_g9(s.feedback_fraction) + ',' + std::to_string(s.ar_count) + ',' +
           std::to_string(s.rm_count) + ',' + format_g9(s.cost_adjusted_reward) + '\n';
  }
  return out;
}

void write_round_csv(const std::filesystem::path& path, std::span<const RoundLog> logs) {
  write_file_atomic(path, round_csv(logs));
}

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows) {
  write_file_atomic(path, summary_csv(rows));
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

struct FieldReader {
  const std::string& source;
  std::size_t line;

  double real(const std::string& tok) const {
    // from_chars does not accept a leading '+', which %.9g never emits.
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size()) fail("bad number '" + tok + "'");
    return v;
  }
  std::uint64_t integer(const std::string& tok) const {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size()) fail("bad integer '" + tok + "'");
    return v;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source, line, what); }
};

template <typename Fn>
void for_each_record(const std::string& text, const std::string& source, const char* header,
                     std::size_t width, Fn&& fn) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || line != header) {
    throw ParseError(source, 1, "unexpected header");
  }
  ++lineno;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_fields(line);
    FieldReader rd{source, lineno};
    if (fields.size() != width) rd.fail("expected " + std::to_string(width) + " fields");
    fn(fields, rd);
  }
}

FeedbackKind parse_kind(const std::string& tok, const FieldReader& rd) {
  if (tok == "none") return FeedbackKind::kNone;
  if (tok == "AR") return FeedbackKind::kAR;
  if (tok == "RM") return FeedbackKind::kRM;
  rd.fail("bad feedback kind '" + tok + "'");
}

}  // namespace

std::vector<RoundLog> read_round_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<RoundLog> logs;
  for_each_record(text, path.string(), kRoundCsvHeader, 8, [&](const auto& f, const FieldReader& rd) {
    RoundLog r;
    r.t = rd.integer(f[0]);
    r.action = rd.integer(f[1]);
    r.true_reward = rd.real(f[2]);
    r.feedback_reward = rd.real(f[3]);
    r.optimal_value = rd.real(f[4]);
    r.entropy = rd.real(f[5]);
    r.feedback.round = r.t;
    r.feedback.kind = parse_kind(f[6], rd);
    r.feedback.expert_correct = rd.integer(f[7]) != 0;
    r.feedback.reward_after = r.feedback_reward;
    logs.push_back(std::move(r));
  });
  return logs;
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text, const std::string& source) {
  std::vector<SummaryRow> rows;
  for_each_record(text, source, kSummaryCsvHeader, 13, [&](const auto& f, const FieldReader& rd) {
    SummaryRow row;
    row.env = f[0];
    row.agent = f[1];
    row.gate = f[2];
    row.feedback_type = f[3];
    if (!f[4].empty()) row.lambda = rd.real(f[4]);
    row.q = rd.real(f[5]);
    row.run = rd.integer(f[6]);
    row.summary.cumulative_regret = rd.real(f[7]);
    row.summary.cumulative_reward = rd.real(f[8]);
    row.summary.feedback_fraction = rd.real(f[9]);
    row.summary.ar_count = rd.integer(f[10]);
    row.summary.rm_count = rd.integer(f[11]);
    row.summary.cost_adjusted_reward = rd.real(f[12]);
    rows.push_back(std::move(row));
  });
  return rows;
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  return parse_summary_csv(read_file(path), path.string());
}

}  // namespace hfb
