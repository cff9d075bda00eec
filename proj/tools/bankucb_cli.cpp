#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"

#include "bankucb/batch_schedule.hpp"
#include "bankucb/config.hpp"
#include "bankucb/runner.hpp"
#include "bankucb/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Batched k-NN UCB contextual bandit experiments"};
  app.set_version_flag("--version", bankucb::kVersion);
  app.require_subcommand(1);

  std::string run_config;
  int workers = 0;
  auto* run = app.add_subcommand("run", "Run an experiment and write results");
  run->add_option("config", run_config, "JSON experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("--workers", workers, "Worker threads (default: BANKUCB_WORKERS or all cores)");

  long long horizon = 0;
  int batches = 0;
  double alpha = 1.0;
  int dim = 0;
  auto* grid = app.add_subcommand("grid", "Print batch endpoints t_0..t_M, one per line");
  grid->add_option("--T", horizon, "Horizon")->required();
  grid->add_option("--M", batches, "Number of batches")->required();
  grid->add_option("--alpha", alpha, "Margin exponent in (0, 1]")->required();
  grid->add_option("--d", dim, "Context dimension")->required();

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check a config and print it with defaults");
  validate->add_option("config", validate_config, "JSON experiment config")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = bankucb::load_config(run_config);
      const auto result = bankucb::run_experiment(cfg, workers);
      bankucb::write_results(result);
      for (const auto& alg : cfg.algorithms) {
        double total = 0.0;
        for (const auto& r : result.runs.at(alg)) total += r.trace.final_regret();
        std::cout << alg << ": mean final regret " << total / cfg.runs << "\n";
      }
      std::cout << "results written to " << cfg.output_dir.string() << "\n";
    } else if (*grid) {
      const auto g = bankucb::make_grid(horizon, batches, alpha, dim);
      for (auto t : g.endpoints) std::cout << t << "\n";
    } else if (*validate) {
      const auto cfg = bankucb::load_config(validate_config);
      std::cout << bankucb::config_to_json(cfg).dump(2) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
