// Times the serial reference runner against the OpenMP runner on the same
// (cell, run) grid and checks that both produce identical summaries.
//
//   bench_grid [threads] [rounds]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "hfb/runner.hpp"

namespace {

std::vector<hfb::ExperimentConfig> make_cells(std::uint64_t rounds) {
  std::vector<hfb::ExperimentConfig> cells;
  for (auto kind : {hfb::AgentKind::kEpsilonGreedy, hfb::AgentKind::kLinUcb,
                    hfb::AgentKind::kHybridLinear, hfb::AgentKind::kBootstrappedTs}) {
    for (double q : {0.2, 0.5, 0.8}) {
      hfb::ExperimentConfig cfg;
      cfg.env.synthetic.theta_star = hfb::SyntheticEnvParams::default_theta(10, 0);
      cfg.agent.kind = kind;
      cfg.gate = hfb::FixedEntropyGate{1.5};
      cfg.expert.quality = q;
      cfg.rounds = rounds;
      cfg.runs = 5;
      cfg.seed = 2024;
      cells.push_back(cfg);
    }
  }
  return cells;
}

template <typename Fn>
double seconds(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : 4;
  const std::uint64_t rounds = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1000;
  const auto cells = make_cells(rounds);
  const hfb::DatasetCache none;

  std::vector<hfb::CellRuns> serial, parallel;
  const double t_serial = seconds([&] { serial = hfb::run_cells_serial(cells, none); });
  const double t_parallel = seconds([&] { parallel = hfb::run_cells_parallel(cells, none, threads); });

  bool same = serial.size() == parallel.size();
  for (std::size_t c = 0; same && c < serial.size(); ++c) {
    for (std::size_t r = 0; r < serial[c].runs.size(); ++r) {
      const auto& a = serial[c].runs[r].summary;
      const auto& b = parallel[c].runs[r].summary;
      same = same && a.cumulative_regret == b.cumulative_regret &&
             a.cumulative_reward == b.cumulative_reward && a.ar_count == b.ar_count &&
             a.rm_count == b.rm_count;
    }
  }

  std::printf("cells=%zu runs/cell=5 rounds=%llu\n", cells.size(),
              static_cast<unsigned long long>(rounds));
  std::printf("serial    %8.3f s\n", t_serial);
  std::printf("openmp x%d %8.3f s  speedup %.2f\n", threads, t_parallel, t_serial / t_parallel);
  std::printf("results identical: %s\n", same ? "yes" : "NO");
  return same ? 0 : 1;
}
