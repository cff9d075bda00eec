#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bankucb/context.hpp"
#include "bankucb/rng.hpp"

namespace bankucb {

/// A context together with the dataset row it came from (-1 for synthetic
/// draws). Dataset rewards depend on the row's label, not on the features.
struct Arrival {
  Context context;
  std::ptrdiff_t row = -1;
};

/// Axis-aligned box containing every context an environment can produce.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

class ContextStream {
public:
  virtual ~ContextStream() = default;
  virtual Arrival next() = 0;
};

/// Reward model Y = f_a(X) + noise over a context law.
///
/// Arms are 0-based: arm 0 is the first reward function, arm 1 the second.
class Environment {
public:
  Environment(int num_arms, int dim, double sigma);
  virtual ~Environment() = default;

  int num_arms() const { return num_arms_; }
  int dim() const { return dim_; }
  double sigma() const { return sigma_; }

  virtual std::string kind() const = 0;
  virtual double mean_reward(ArmId arm, const Arrival& arrival) const = 0;
  /// Independent context sequence for one run.
  virtual std::unique_ptr<ContextStream> stream(std::uint64_t seed) const = 0;
  virtual Box support() const = 0;
  /// Number of rounds the context source can supply, when finite.
  virtual std::optional<Round> fixed_horizon() const { return std::nullopt; }

  double optimal_value(const Arrival& arrival) const;
  /// Lowest-index arm attaining the optimal value.
  ArmId optimal_arm(const Arrival& arrival) const;
  /// Mean reward plus Normal(0, sigma^2) noise from `noise`.
  double draw_reward(ArmId arm, const Arrival& arrival, Rng& noise) const;

protected:
  void check_arm(ArmId arm) const;

private:
  int num_arms_;
  int dim_;
  double sigma_;
};

/// Contexts drawn uniformly from [-1, 1]^d.
class UniformCubeEnvironment : public Environment {
public:
  using Environment::Environment;

  virtual double mean(ArmId arm, const Context& x) const = 0;
  double mean_reward(ArmId arm, const Arrival& arrival) const override {
    return mean(arm, arrival.context);
  }
  std::unique_ptr<ContextStream> stream(std::uint64_t seed) const override;
  Box support() const override;
};

struct BumpSpec {
  std::vector<Context> centers;
  std::vector<int> signs;  // each +1 or -1
  double radius = 0.6;
  double height = 0.5;
};

/// Arm 0: signed sum of indicator bumps h * v_j * 1{||x - c_j|| <= r}.
/// Arm 1: identically zero. Overlapping bumps add.
class BumpEnvironment final : public UniformCubeEnvironment {
public:
  BumpEnvironment(BumpSpec spec, int dim, double sigma);

  std::string kind() const override { return "setting1"; }
  double mean(ArmId arm, const Context& x) const override;
  const BumpSpec& bumps() const { return spec_; }

private:
  BumpSpec spec_;
};

/// Arm 0: ||x||; arm 1: 0.5 - ||x||. Arms tie on the sphere ||x|| = 0.25.
class NormEnvironment final : public UniformCubeEnvironment {
public:
  NormEnvironment(int dim, double sigma);

  std::string kind() const override { return "setting2"; }
  double mean(ArmId arm, const Context& x) const override;
};

/// Centers uniform on [-1, 1]^d and Rademacher signs, both drawn from rng.
BumpEnvironment make_setting1(int dim, int num_bumps, double radius, double height, double sigma,
                              Rng& rng);
NormEnvironment make_setting2(int dim, double sigma);

class DatasetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Labelled table replayed as a bandit: one arm per class, reward 1 when the
/// chosen arm is the row's class and 0 otherwise.
class DatasetEnvironment final : public Environment {
public:
  DatasetEnvironment(std::vector<std::vector<double>> features, std::vector<int> labels,
                     std::vector<std::string> class_names, std::uint64_t runs_seed);

  std::string kind() const override { return "dataset"; }
  double mean_reward(ArmId arm, const Arrival& arrival) const override;
  std::unique_ptr<ContextStream> stream(std::uint64_t seed) const override;
  Box support() const override;
  std::optional<Round> fixed_horizon() const override { return static_cast<Round>(rows()); }

  std::size_t rows() const { return labels_.size(); }
  const std::vector<Context>& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& class_names() const { return class_names_; }

  /// Presentation order for a stream seed.
  std::vector<std::size_t> permutation(std::uint64_t seed) const;
  /// Presentation order of run `run`, derived from the loader's runs_seed.
  std::vector<std::size_t> permutation_for_run(std::uint64_t run) const;

private:
  std::vector<Context> features_;
  std::vector<int> labels_;
  std::vector<std::string> class_names_;
  std::uint64_t runs_seed_;
};

struct DatasetOptions {
  std::variant<std::string, std::size_t> label_column = std::size_t{0};
  bool has_header = true;
  /// 0 picks tab when the first line contains a tab but no comma.
  char delimiter = 0;
};

/// Reads a comma- or tab-separated table; every non-label column must be
/// numeric. Features are min-max scaled to [0, 1] per column (constant
/// columns become 0) and classes are numbered in sorted label order.
DatasetEnvironment load_dataset(const std::filesystem::path& path, const DatasetOptions& options,
                                std::uint64_t runs_seed);

}  // namespace bankucb
