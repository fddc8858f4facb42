#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hfb/analysis.hpp"
#include "hfb/config.hpp"
#include "hfb/dataset.hpp"

namespace hfb {

struct RunResult {
  std::uint64_t run = 0;
  std::vector<RoundLog> logs;
  RunSummary summary;
};

// Loaded corpora keyed by absolute path; shared read-only by every run.
using DatasetCache = std::map<std::string, std::shared_ptr<const MultiLabelDataset>>;

// Loads every dataset the configs reference (once per path).
DatasetCache load_datasets(const std::vector<ExperimentConfig>& cells);

std::unique_ptr<Environment> make_environment(const ExperimentConfig& cfg, std::uint64_t run,
                                              const DatasetCache& datasets);

// One independent run of the gated feedback loop. Seeds derive from
// cfg.seed ^ run, with separate child streams for the environment, the
// agent's initialization, the agent's own draws, and the expert.
RunResult run_single(const ExperimentConfig& cfg, std::uint64_t run, const DatasetCache& datasets);

// All runs of every cell, flattened in (cell, run) order. The serial path is
// the reference; the parallel path distributes (cell, run) jobs over OpenMP
// threads and writes each result into its own slot, so both return
// identical vectors.
struct CellRuns {
  ExperimentConfig cfg;
  std::vector<RunResult> runs;
};
std::vector<CellRuns> run_cells_serial(const std::vector<ExperimentConfig>& cells,
                                       const DatasetCache& datasets);
std::vector<CellRuns> run_cells_parallel(const std::vector<ExperimentConfig>& cells,
                                         const DatasetCache& datasets, int threads);

// Runs cfg.runs trials; threads <= 1 takes the serial path.
std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, int threads = 1);

struct GridCell {
  double lambda;
  double q;
  ExperimentConfig cfg;
  std::vector<RunResult> runs;
  AggregateSummary aggregate;
};

// Cross product of entropy thresholds and expert qualities on top of `base`
// (each cell gets a FixedEntropy gate). Cells are ordered lambda-major.
std::vector<GridCell> run_grid(const ExperimentConfig& base, const std::vector<double>& lambdas,
                               const std::vector<double>& qs, int threads = 1);

}  // namespace hfb
