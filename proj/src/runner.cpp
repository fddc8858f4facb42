#include "hfb/runner.hpp"

#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hfb/agents.hpp"
#include "hfb/environments.hpp"
#include "hfb/feedback.hpp"

namespace hfb {

namespace {

enum StreamTag : std::uint64_t {
  kEnvStream = 1,
  kAgentInitStream = 2,
  kAgentStream = 3,
  kExpertStream = 4,
};

}  // namespace

DatasetCache load_datasets(const std::vector<ExperimentConfig>& cells) {
  DatasetCache cache;
  for (const auto& cfg : cells) {
    if (cfg.env.kind != EnvSpec::Kind::kDataset) continue;
    const std::string key = cfg.env.dataset_path.string();
    if (cache.count(key)) continue;
    auto ds = std::make_shared<MultiLabelDataset>(load_xmlc(cfg.env.dataset_path));
    if (ds->size() == 0) throw ConfigError("env.path", key + " contains no instances");
    cache.emplace(key, std::move(ds));
  }
  return cache;
}

std::unique_ptr<Environment> make_environment(const ExperimentConfig& cfg, std::uint64_t run,
                                              const DatasetCache& datasets) {
  const RngStream stream = RngStream(run_seed(cfg.seed, run)).derive(kEnvStream);
  if (cfg.env.kind == EnvSpec::Kind::kSynthetic) {
    return std::make_unique<SyntheticEnvironment>(cfg.env.synthetic, stream);
  }
  auto it = datasets.find(cfg.env.dataset_path.string());
  if (it == datasets.end()) {
    throw std::invalid_argument("dataset not loaded: " + cfg.env.dataset_path.string());
  }
  return std::make_unique<DatasetEnvironment>(it->second, stream);
}

RunResult run_single(const ExperimentConfig& cfg, std::uint64_t run, const DatasetCache& datasets) {
  const RngStream root(run_seed(cfg.seed, run));
  auto env = make_environment(cfg, run, datasets);
  auto agent = make_agent(cfg.agent, *env, root.derive(kAgentInitStream));
  RngStream agent_rng = root.derive(kAgentStream);
  RngStream expert_rng = root.derive(kExpertStream);

  const GateMode mode = cfg.gate_mode();
  const FeedbackKind single = cfg.single_type();
  const std::size_t k = env->num_actions();

  RunResult result;
  result.run = run;
  result.logs.reserve(cfg.rounds);
  for (std::uint64_t t = 0; t < cfg.rounds; ++t) {
    const RoundData rd = env->round(t);
    const Observation obs = Observation::from(rd);
    auto [action, policy] = agent->act(obs, agent_rng);
    const double h = entropy(policy);

    RoundLog log;
    log.t = t;
    log.entropy = h;
    log.optimal_value = rd.optimal_value();
    log.feedback.round = t;

    switch (gate_decide(cfg.gate, h, t, mode, single)) {
      case GateDecision::kNoFeedback:
        log.feedback.kind = FeedbackKind::kNone;
        log.feedback.reward_before = rd.rewards[action];
        log.feedback.reward_after = log.feedback.reward_before;
        break;
      case GateDecision::kRequestAR: {
        Recommendation rec = expert_ar(rd.correct_actions, cfg.expert, k, expert_rng);
        action = apply_ar(action, rec.actions, expert_rng);
        log.feedback.kind = FeedbackKind::kAR;
        log.feedback.recommended_set = std::move(rec.actions);
        log.feedback.expert_correct = rec.expert_correct;
        log.feedback.reward_before = rd.rewards[action];
        log.feedback.reward_after = log.feedback.reward_before;
        break;
      }
      case GateDecision::kRequestRM: {
        const Penalty pen = expert_rm(action, rd.correct_actions, cfg.expert, expert_rng);
        log.feedback.kind = FeedbackKind::kRM;
        log.feedback.recommended_set = rd.correct_actions;
        log.feedback.expert_correct = pen.expert_correct;
        log.feedback.reward_before = rd.rewards[action];
        log.feedback.reward_after = log.feedback.reward_before + pen.reward_delta;
        break;
      }
    }
    log.action = action;
    log.true_reward = rd.rewards[action];
    log.feedback_reward = log.feedback.reward_after;
    agent->update(obs, action, log.feedback_reward, agent_rng);
    result.logs.push_back(std::move(log));
  }
  result.summary = summarize(result.logs, cfg.cost);
  return result;
}

namespace {

std::vector<CellRuns> empty_cells(const std::vector<ExperimentConfig>& cells) {
  std::vector<CellRuns> out;
  out.reserve(cells.size());
  for (const auto& cfg : cells) {
    cfg.validate();
    out.push_back({cfg, std::vector<RunResult>(cfg.runs)});
  }
  return out;
}

}  // namespace

std::vector<CellRuns> run_cells_serial(const std::vector<ExperimentConfig>& cells,
                                       const DatasetCache& datasets) {
  auto out = empty_cells(cells);
  for (auto& cell : out) {
    for (std::uint64_t r = 0; r < cell.cfg.runs; ++r) cell.runs[r] = run_single(cell.cfg, r, datasets);
  }
  return out;
}

std::vector<CellRuns> run_cells_parallel(const std::vector<ExperimentConfig>& cells,
                                         const DatasetCache& datasets, int threads) {
  auto out = empty_cells(cells);
  struct Job {
    std::size_t cell;
    std::uint64_t run;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < out.size(); ++c) {
    for (std::uint64_t r = 0; r < out[c].cfg.runs; ++r) jobs.push_back({c, r});
  }

  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads > 0 ? threads : 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const Job& job = jobs[static_cast<std::size_t>(i)];
      out[job.cell].runs[job.run] = run_single(out[job.cell].cfg, job.run, datasets);
    } catch (...) {
#pragma omp critical(hfb_runner_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, int threads) {
  const std::vector<ExperimentConfig> cells{cfg};
  const DatasetCache datasets = load_datasets(cells);
  auto out = threads <= 1 ? run_cells_serial(cells, datasets)
                          : run_cells_parallel(cells, datasets, threads);
  return std::move(out.front().runs);
}

std::vector<GridCell> run_grid(const ExperimentConfig& base, const std::vector<double>& lambdas,
                               const std::vector<double>& qs, int threads) {
  if (lambdas.empty()) throw ConfigError("lambdas", "sweep list is empty");
  if (qs.empty()) throw ConfigError("qs", "sweep list is empty");
  std::vector<ExperimentConfig> cells;
  for (double lambda : lambdas) {
    for (double q : qs) {
      ExperimentConfig cfg = base;
      cfg.gate = FixedEntropyGate{lambda};
      cfg.expert.quality = q;
      cfg.validate();
      cells.push_back(std::move(cfg));
    }
  }
  const DatasetCache datasets = load_datasets(cells);
  auto done = threads <= 1 ? run_cells_serial(cells, datasets)
                           : run_cells_parallel(cells, datasets, threads);

  std::vector<GridCell> grid;
  grid.reserve(done.size());
  std::size_t i = 0;
  for (double lambda : lambdas) {
    for (double q : qs) {
      auto& c = done[i++];
      std::vector<RunSummary> sums;
      for (const auto& r : c.runs) sums.push_back(r.summary);
      grid.push_back({lambda, q, std::move(c.cfg), std::move(c.runs), aggregate(sums)});
    }
  }
  return grid;
}

}  // namespace hfb
