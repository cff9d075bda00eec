#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <vector>

#include "bankucb/knn.hpp"
#include "bankucb/policy.hpp"

namespace bankucb {

struct BankUcbConfig {
  double lipschitz = 1.0;  // L
  double sigma = 0.5;      // sub-Gaussian noise scale
  int num_arms = 2;
  int dim = 1;
  std::uint64_t tie_seed = 0;

  void validate() const;
};

/// Upper confidence bound: a finite value or +infinity when the arm has no
/// usable neighbor near the query.
class UcbValue {
public:
  static UcbValue finite(double v) { return UcbValue(v); }
  static UcbValue infinity() { return UcbValue(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
  double value() const { return value_; }

  friend auto operator<=>(const UcbValue&, const UcbValue&) = default;

private:
  explicit UcbValue(double v) : value_(v) {}
  double value_;
};

/// Noise bound sqrt(2 sigma^2 / k * ln(d * t_prev^(2d+3) * K)), with the
/// logarithm expanded so large t_prev does not overflow.
double noise_bound(std::size_t k, const BankUcbConfig& cfg, Round t_prev);

/// Batched k-NN UCB policy.
///
/// During batch m every UCB is computed from the frozen history of batches
/// 1..m-1 only. Feedback recorded during the batch becomes visible at the
/// next commit.
class BankUcbPolicy final : public BatchedPolicy {
public:
  BankUcbPolicy(BankUcbConfig cfg, BatchGrid grid);

  std::string name() const override { return "bank_ucb"; }
  const BankUcbConfig& config() const { return cfg_; }
  const ArmHistory& frozen() const { return frozen_; }

  UcbValue ucb(const Context& x, ArmId arm) const;
  std::vector<UcbValue> ucbs(const Context& x) const;

protected:
  ArmId choose(const Context& x) override;
  void absorb(const std::vector<Sample>& batch) override;

private:
  BankUcbConfig cfg_;
  ArmHistory frozen_;
};

}  // namespace bankucb
