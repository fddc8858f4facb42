// hfb: run, sweep and summarize entropy-gated feedback bandit experiments.
//
//   hfb run    --config <path> [--out <dir>] [--seed <u64>] [--threads <n>]
//   hfb sweep  --config <path> --lambdas <csv|preset> --qs <csv> [--out] [--seed] [--threads]
//   hfb report --summary <path>
//   hfb gen-toy --out <path> [--n 500] [--m 50] [--k 10] [--seed 7]
//
// Exit codes: 0 success, 1 configuration or input error, 2 I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hfb/config.hpp"
#include "hfb/csv.hpp"
#include "hfb/dataset.hpp"
#include "hfb/io.hpp"
#include "hfb/report.hpp"
#include "hfb/runner.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw hfb::ConfigError(field, "bad number '" + tok + "'");
    }
  }
  if (out.empty()) throw hfb::ConfigError(field, "empty list");
  return out;
}

std::vector<double> parse_lambdas(const std::string& text) {
  if (!text.empty() && std::isalpha(static_cast<unsigned char>(text.front()))) {
    try {
      return hfb::lambda_preset(text);
    } catch (const std::invalid_argument& e) {
      throw hfb::ConfigError("lambdas", e.what());
    }
  }
  return parse_list(text, "lambdas");
}

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
};

hfb::ExperimentConfig resolve(const Common& c) {
  hfb::ExperimentConfig cfg = hfb::load_config(c.config);
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.seed_set) cfg.seed = c.seed;
  return cfg;
}

void write_echo(const hfb::ExperimentConfig& cfg) {
  hfb::write_file_atomic(cfg.out_dir / "config.json", hfb::config_to_json(cfg).dump(2) + "\n");
}

int cmd_run(const Common& c) {
  const hfb::ExperimentConfig cfg = resolve(c);
  const auto runs = hfb::run_experiment(cfg, c.threads);
  std::filesystem::create_directories(cfg.out_dir);
  std::vector<hfb::SummaryRow> rows;
  for (const auto& r : runs) {
    hfb::write_round_csv(cfg.out_dir / ("rounds_run" + std::to_string(r.run) + ".csv"), r.logs);
    rows.push_back(hfb::make_summary_row(cfg, r.run, r.summary));
  }
  hfb::write_summary_csv(cfg.out_dir / "summary.csv", rows);
  write_echo(cfg);
  std::cout << hfb::render_report(hfb::build_report(rows));
  return 0;
}

int cmd_sweep(const Common& c, const std::string& lambdas_text, const std::string& qs_text) {
  const hfb::ExperimentConfig cfg = resolve(c);
  const auto lambdas = parse_lambdas(lambdas_text);
  const auto qs = parse_list(qs_text, "qs");
  const auto grid = hfb::run_grid(cfg, lambdas, qs, c.threads);

  std::filesystem::create_directories(cfg.out_dir);
  std::vector<hfb::SummaryRow> rows;
  std::string grid_csv = hfb::kGridCsvHeader;
  grid_csv += '\n';
  for (const auto& cell : grid) {
    for (const auto& r : cell.runs) rows.push_back(hfb::make_summary_row(cell.cfg, r.run, r.summary));
    grid_csv += hfb::format_g9(cell.lambda) + ',' + hfb::format_g9(cell.q) + ',' +
                std::string(hfb::to_string(cell.cfg.feedback_type)) + ',' +
                hfb::format_g9(cell.aggregate.cumulative_regret.mean) + ',' +
                hfb::format_g9(cell.aggregate.cumulative_regret.std) + ',' +
                hfb::format_g9(cell.aggregate.feedback_fraction.mean) + '\n';
  }
  hfb::write_summary_csv(cfg.out_dir / "summary.csv", rows);
  hfb::write_file_atomic(cfg.out_dir / "grid.csv", grid_csv);
  write_echo(cfg);
  std::cout << grid_csv << '\n' << hfb::render_report(hfb::build_report(rows));
  return 0;
}

int cmd_report(const std::string& summary) {
  const auto rows = hfb::read_summary_csv(summary);
  if (rows.empty()) throw hfb::ConfigError("summary", "no rows in " + summary);
  std::cout << hfb::render_report(hfb::build_report(rows));
  return 0;
}

int cmd_gen_toy(const std::string& out, std::size_t n, std::size_t m, std::size_t k,
                std::uint64_t seed) {
  hfb::save_xmlc(out, hfb::make_toy_multilabel(n, m, k, seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual bandits with entropy-gated expert feedback"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "experiment config (JSON)")->required();
    sub->add_option("--out", common.out, "output directory (overrides out_dir)");
    sub->add_option("--seed", common.seed, "base seed (overrides seed)")
        ->each([&](const std::string&) { common.seed_set = true; });
    sub->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "run one configuration over its seeds");
  add_common(run);

  std::string lambdas, qs;
  auto* sweep = app.add_subcommand("sweep", "grid over entropy thresholds and expert quality");
  add_common(sweep);
  sweep->add_option("--lambdas", lambdas, "comma list or preset (bibtex, mediamill, delicious, yahoo, all)")
      ->required();
  sweep->add_option("--qs", qs, "comma list of expert qualities")->required();

  std::string summary;
  auto* report = app.add_subcommand("report", "print the comparison table of a summary CSV");
  report->add_option("--summary", summary, "summary.csv")->required();

  std::string toy_out;
  std::size_t toy_n = 500, toy_m = 50, toy_k = 10;
  std::uint64_t toy_seed = 7;
  auto* gen = app.add_subcommand("gen-toy", "write the synthetic multi-label fixture");
  gen->add_option("--out", toy_out, "dataset path")->required();
  gen->add_option("--n", toy_n);
  gen->add_option("--m", toy_m);
  gen->add_option("--k", toy_k);
  gen->add_option("--seed", toy_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(common);
    if (*sweep) return cmd_sweep(common, lambdas, qs);
    if (*report) return cmd_report(summary);
    if (*gen) return cmd_gen_toy(toy_out, toy_n, toy_m, toy_k, toy_seed);
  } catch (const hfb::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const hfb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hfb::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
