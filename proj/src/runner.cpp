#include "bankucb/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "bankucb/bank_ucb.hpp"
#include "bankucb/binse.hpp"
#include "bankucb/results_io.hpp"
#include "bankucb/version.hpp"

namespace bankucb {

using nlohmann::json;
namespace fs = std::filesystem;

RunSeeds run_seeds(std::uint64_t master_seed, const std::string& algorithm, int run) {
  const auto r = static_cast<std::uint64_t>(run);
  return RunSeeds{
      derive_seed(master_seed, "contexts", r),
      derive_seed(master_seed, "noise", r),
      derive_seed(derive_seed(master_seed, "ties", r), algorithm),
  };
}

std::shared_ptr<const Environment> make_environment(const ExperimentConfig& cfg) {
  const auto& spec = cfg.environment;
  if (spec.kind == "setting1") {
    Rng rng(spec.bump_seed.value_or(derive_seed(cfg.master_seed, "environment")));
    return std::make_shared<BumpEnvironment>(
        make_setting1(spec.dim, spec.num_bumps, spec.radius, spec.height, cfg.sigma, rng));
  }
  if (spec.kind == "setting2") {
    return std::make_shared<NormEnvironment>(make_setting2(spec.dim, cfg.sigma));
  }
  if (spec.kind == "dataset") {
    DatasetOptions opts;
    opts.label_column = spec.label_column;
    opts.has_header = spec.has_header;
    opts.delimiter = spec.delimiter;
    return std::make_shared<DatasetEnvironment>(load_dataset(spec.path, opts, cfg.master_seed));
  }
  throw ConfigError("environment.kind: unsupported '" + spec.kind + "'");
}

Round experiment_horizon(const ExperimentConfig& cfg, const Environment& env) {
  return env.fixed_horizon().value_or(cfg.horizon);
}

BatchGrid experiment_grid(const ExperimentConfig& cfg, const Environment& env) {
  return make_grid(experiment_horizon(cfg, env), cfg.num_batches, cfg.alpha, env.dim());
}

std::unique_ptr<BatchedPolicy> make_policy(const std::string& algorithm, const Environment& env,
                                           const BatchGrid& grid, double lipschitz,
                                           double sigma, std::uint64_t tie_seed) {
  if (algorithm == "bank_ucb") {
    BankUcbConfig cfg{lipschitz, sigma, env.num_arms(), env.dim(), tie_seed};
    return std::make_unique<BankUcbPolicy>(cfg, grid);
  }
  if (algorithm == "binse") {
    BinseConfig cfg{lipschitz, sigma, env.num_arms(), env.dim(), tie_seed, env.support()};
    return std::make_unique<BinsePolicy>(std::move(cfg), grid);
  }
  if (algorithm == "uniform_random") {
    return std::make_unique<UniformRandomPolicy>(grid, env.num_arms(), tie_seed);
  }
  throw std::invalid_argument("unknown algorithm '" + algorithm + "'");
}

RunResult simulate_run(const Environment& env, const BatchGrid& grid, const std::string& algorithm,
                       double lipschitz, double sigma, std::uint64_t master_seed, int run,
                       const RunOptions& options) {
  const RunSeeds seeds = run_seeds(master_seed, algorithm, run);
  auto policy = make_policy(algorithm, env, grid, lipschitz, sigma, seeds.ties);
  auto contexts = env.stream(seeds.contexts);
  Rng noise(seeds.noise);

  RunResult result{algorithm, run, {}, {}};
  result.trace.run = run;
  result.trace.steps.reserve(static_cast<std::size_t>(grid.horizon()));
  std::vector<Sample> feedback;

  for (int m = 1; m <= grid.num_batches(); ++m) {
    for (Round t = grid.batch_start(m) + 1; t <= grid.batch_end(m); ++t) {
      const Arrival arrival = contexts->next();
      if (options.before_select) options.before_select(*policy, arrival, t);
      const ArmId arm = policy->select_action(arrival.context);
      const double reward = env.draw_reward(arm, arrival, noise);
      TraceStep step;
      step.t = t;
      step.batch = m;
      step.context = arrival.context.vector();
      step.chosen = arm;
      step.optimal = env.optimal_arm(arrival);
      step.reward = reward;
      step.inst_regret = instantaneous_regret(env, arrival, arm);
      result.trace.append(std::move(step));
      feedback.push_back(Sample{arrival.context, arm, reward, t});
    }
    if (options.feedback_shuffle_seed) {
      Rng shuffle(derive_seed(*options.feedback_shuffle_seed, "feedback",
                              static_cast<std::uint64_t>(m)));
      std::shuffle(feedback.begin(), feedback.end(), shuffle);
    }
    for (const auto& s : feedback) policy->record(s);
    feedback.clear();
    policy->commit_batch();
    if (grid.batch_end(m) < grid.horizon()) result.commits.push_back(grid.batch_end(m));
  }
  return result;
}

int worker_count() {
  if (const char* env = std::getenv("BANKUCB_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
  ExperimentResult result;
  result.config = cfg;
  result.environment = make_environment(cfg);
  result.horizon = experiment_horizon(cfg, *result.environment);
  result.grid = experiment_grid(cfg, *result.environment);

  struct Job {
    std::string algorithm;
    int run;
  };
  std::vector<Job> jobs;
  for (const auto& alg : cfg.algorithms) {
    result.runs[alg].resize(static_cast<std::size_t>(cfg.runs));
    for (int r = 0; r < cfg.runs; ++r) jobs.push_back({alg, r});
  }

  if (workers <= 0) workers = worker_count();
  workers = std::min<int>(workers, static_cast<int>(jobs.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto& job = jobs[i];
      try {
        result.runs.at(job.algorithm)[static_cast<std::size_t>(job.run)] =
            simulate_run(*result.environment, result.grid, job.algorithm, cfg.lipschitz,
                         cfg.sigma, cfg.master_seed, job.run);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

namespace {

json lookup(const json& doc, const std::string& dotted) {
  const auto dot = dotted.find('.');
  const auto section = dotted.substr(0, dot);
  const auto key = dotted.substr(dot + 1);
  if (doc.contains(section) && doc.at(section).contains(key)) return doc.at(section).at(key);
  return nullptr;
}

json environment_details(const Environment& env) {
  json out{{"kind", env.kind()}, {"num_arms", env.num_arms()}, {"dim", env.dim()},
           {"noise_sigma", env.sigma()}};
  if (const auto* bumps = dynamic_cast<const BumpEnvironment*>(&env)) {
    json centers = json::array();
    for (const auto& c : bumps->bumps().centers) centers.push_back(c.vector());
    out["bump_centers"] = centers;
    out["bump_signs"] = bumps->bumps().signs;
  }
  if (const auto* data = dynamic_cast<const DatasetEnvironment*>(&env)) {
    out["rows"] = data->rows();
    out["classes"] = data->class_names();
    out["normalization"] = "min-max per column to [0, 1]";
  }
  return out;
}

}  // namespace

void write_results(const ExperimentResult& result) {
  const auto& cfg = result.config;
  const auto& env = *result.environment;
  const fs::path dir = cfg.output_dir;
  const Round stride = cfg.resolved_stride(result.horizon);
  const Round window = cfg.resolved_window(result.horizon);
  const auto checkpoints = checkpoint_rounds(result.horizon, stride);

  json files = json::array();
  json commits = json::object();
  json finals = json::object();
  for (const auto& alg : cfg.algorithms) {
    const auto& runs = result.runs.at(alg);
    std::vector<Series> regret;
    std::vector<Series> rolling;
    double final_sum = 0.0;
    for (const auto& r : runs) {
      regret.push_back(cumulative_at(r.trace, checkpoints));
      rolling.push_back(sample_series(rolling_error(r.trace, window), checkpoints));
      final_sum += r.trace.final_regret();
      if (cfg.write_traces) {
        const auto rel = fs::path("traces") / alg / fmt::format("run_{:03}.csv", r.run);
        write_atomic(dir / rel, trace_csv(r.trace, env.dim()));
        files.push_back(rel.generic_string());
      }
    }
    const auto summarize = [&](const std::vector<Series>& s) {
      return s.size() >= 2 ? aggregate_runs(s) : mean_series(s);
    };
    const auto summary_name = "summary_" + alg + ".csv";
    const auto rolling_name = "rolling_" + alg + ".csv";
    write_atomic(dir / summary_name, summary_csv(alg, summarize(regret), "mean_cum_regret"));
    write_atomic(dir / rolling_name, summary_csv(alg, summarize(rolling), "mean_rolling_error"));
    files.push_back(summary_name);
    files.push_back(rolling_name);
    commits[alg] = runs.empty() ? std::vector<Round>{} : runs.front().commits;
    finals[alg] = final_sum / static_cast<double>(runs.size());
  }

  const json resolved = config_to_json(cfg);
  json defaulted = json::object();
  for (const auto& name : cfg.defaulted) defaulted[name] = lookup(resolved, name);
  if (cfg.checkpoint_stride == 0) defaulted["experiment.checkpoint_stride"] = stride;
  if (cfg.rolling_window == 0) defaulted["experiment.rolling_window"] = window;

  json seeds = json::array();
  for (int r = 0; r < cfg.runs; ++r) {
    json ties = json::object();
    for (const auto& alg : cfg.algorithms) ties[alg] = run_seeds(cfg.master_seed, alg, r).ties;
    const auto s = run_seeds(cfg.master_seed, cfg.algorithms.front(), r);
    seeds.push_back({{"run", r}, {"contexts", s.contexts}, {"noise", s.noise}, {"ties", ties}});
  }

  json manifest{
      {"version", kVersion},
      {"config", resolved},
      {"defaulted", defaulted},
      {"horizon", result.horizon},
      {"checkpoint_stride", stride},
      {"rolling_window", window},
      {"noise_law", "gaussian(0, sigma^2)"},
      {"environment", environment_details(env)},
      {"grid",
       {{"endpoints", result.grid.endpoints},
        {"gamma", result.grid.gamma},
        {"scale", result.grid.scale}}},
      {"commits", commits},
      {"mean_final_regret", finals},
      {"master_seed", cfg.master_seed},
      {"run_seeds", seeds},
      {"files", files},
  };
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace bankucb
