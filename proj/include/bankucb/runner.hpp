#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bankucb/batch_schedule.hpp"
#include "bankucb/config.hpp"
#include "bankucb/environment.hpp"
#include "bankucb/metrics.hpp"
#include "bankucb/policy.hpp"

namespace bankucb {

/// Per-run seeds. Contexts and noise depend only on (master, run), so every
/// algorithm sees the same context and noise sequence for a given run.
struct RunSeeds {
  std::uint64_t contexts = 0;
  std::uint64_t noise = 0;
  std::uint64_t ties = 0;
};
RunSeeds run_seeds(std::uint64_t master_seed, const std::string& algorithm, int run);

std::shared_ptr<const Environment> make_environment(const ExperimentConfig& cfg);
Round experiment_horizon(const ExperimentConfig& cfg, const Environment& env);
BatchGrid experiment_grid(const ExperimentConfig& cfg, const Environment& env);

std::unique_ptr<BatchedPolicy> make_policy(const std::string& algorithm, const Environment& env,
                                           const BatchGrid& grid, double lipschitz,
                                           double sigma, std::uint64_t tie_seed);

struct RunOptions {
  /// When set, each batch's feedback is handed to the policy in an order
  /// shuffled by this seed instead of time order.
  std::optional<std::uint64_t> feedback_shuffle_seed;
  /// Called before every action selection.
  std::function<void(const BatchedPolicy&, const Arrival&, Round)> before_select;
};

struct RunResult {
  std::string algorithm;
  int run = 0;
  RegretTrace trace;
  /// Rounds at which the policy absorbed feedback and changed its estimate
  /// (every batch end except T).
  std::vector<Round> commits;
};

/// One replication of the batched interaction loop: each round draws a
/// context, asks the policy for an arm and draws its reward; at t_m the
/// batch's feedback is recorded and committed.
RunResult simulate_run(const Environment& env, const BatchGrid& grid, const std::string& algorithm,
                       double lipschitz, double sigma, std::uint64_t master_seed, int run,
                       const RunOptions& options = {});

struct ExperimentResult {
  ExperimentConfig config;
  std::shared_ptr<const Environment> environment;
  BatchGrid grid;
  Round horizon = 0;
  /// Runs per algorithm, in run-index order.
  std::map<std::string, std::vector<RunResult>> runs;
};

/// Worker count: BANKUCB_WORKERS when set, else hardware concurrency.
int worker_count();

/// Runs every (algorithm, run) pair on a worker pool; results are ordered by
/// run index regardless of completion order.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers = 0);

/// Writes manifest.json, per-algorithm summary and rolling-error CSVs and,
/// when enabled, per-run traces under cfg.output_dir.
void write_results(const ExperimentResult& result);

}  // namespace bankucb
