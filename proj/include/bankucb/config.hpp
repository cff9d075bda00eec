#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bankucb/context.hpp"

namespace bankucb {

/// Schema violation; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EnvironmentSpec {
  std::string kind = "setting2";  // setting1 | setting2 | dataset
  int dim = 2;
  // setting1
  int num_bumps = 6;
  double radius = 0.6;
  double height = 0.5;
  std::optional<std::uint64_t> bump_seed;
  // dataset
  std::filesystem::path path;
  std::variant<std::string, std::size_t> label_column = std::size_t{0};
  bool has_header = true;
  char delimiter = 0;
};

struct ExperimentConfig {
  EnvironmentSpec environment;
  Round horizon = 10000;  // replaced by the row count for datasets
  int num_batches = 5;
  double alpha = 1.0;
  double lipschitz = 1.0;
  double sigma = 0.5;
  std::vector<std::string> algorithms{"bank_ucb", "binse"};
  int runs = 30;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir = "results";
  Round checkpoint_stride = 0;  // 0: T / 100
  Round rolling_window = 0;     // 0: max(100, T / 20)
  bool write_traces = true;

  /// Dotted names of keys that were filled from defaults.
  std::vector<std::string> defaulted;

  Round resolved_stride(Round horizon_used) const;
  Round resolved_window(Round horizon_used) const;
};

inline const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names{"bank_ucb", "binse", "uniform_random"};
  return names;
}

/// Validates a JSON document against the config schema and applies
/// defaults. Unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Resolved configuration, including defaulted values.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace bankucb
