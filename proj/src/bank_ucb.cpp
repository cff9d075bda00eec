#include "bankucb/bank_ucb.hpp"

#include <cmath>

namespace bankucb {

void BankUcbConfig::validate() const {
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw std::invalid_argument("Lipschitz constant must be positive");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be nonnegative");
  }
  if (num_arms < 2) throw std::invalid_argument("need at least two arms");
  if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
}

double noise_bound(std::size_t k, const BankUcbConfig& cfg, Round t_prev) {
  if (k == 0) throw std::invalid_argument("noise bound needs k >= 1");
  if (t_prev < 2) throw std::invalid_argument("noise bound needs t_prev >= 2");
  const double d = cfg.dim;
  const double log_arg = std::log(d) + (2.0 * d + 3.0) * std::log(static_cast<double>(t_prev)) +
                         std::log(static_cast<double>(cfg.num_arms));
  return std::sqrt(2.0 * cfg.sigma * cfg.sigma / static_cast<double>(k) * log_arg);
}

BankUcbPolicy::BankUcbPolicy(BankUcbConfig cfg, BatchGrid grid)
    : BatchedPolicy(std::move(grid), cfg.num_arms, cfg.tie_seed),
      cfg_(cfg),
      frozen_(static_cast<std::size_t>(cfg.dim), cfg.num_arms) {
  cfg_.validate();
}

UcbValue BankUcbPolicy::ucb(const Context& x, ArmId arm) const {
  const Round t_prev = frozen_horizon();
  NeighborQuery query(frozen_, x, arm);
  const auto k = adaptive_k(query, cfg_.lipschitz, t_prev);
  if (!k) return UcbValue::infinity();
  const NeighborStats stats = neighbor_stats(query, *k);
  return UcbValue::finite(stats.mean + noise_bound(*k, cfg_, t_prev) +
                          cfg_.lipschitz * stats.radius);
}

std::vector<UcbValue> BankUcbPolicy::ucbs(const Context& x) const {
  std::vector<UcbValue> out;
  out.reserve(static_cast<std::size_t>(cfg_.num_arms));
  for (ArmId a = 0; a < cfg_.num_arms; ++a) out.push_back(ucb(x, a));
  return out;
}

ArmId BankUcbPolicy::choose(const Context& x) {
  const auto values = ucbs(x);
  std::vector<ArmId> best{0};
  for (ArmId a = 1; a < cfg_.num_arms; ++a) {
    const auto& v = values[static_cast<std::size_t>(a)];
    const auto& top = values[static_cast<std::size_t>(best.front())];
    if (v > top) {
      best.assign(1, a);
    } else if (v == top) {
      best.push_back(a);
    }
  }
  return break_tie(best);
}

void BankUcbPolicy::absorb(const std::vector<Sample>& batch) {
  for (const auto& s : batch) frozen_.insert(s);
  frozen_.freeze(grid().batch_end(batch_index()));
}

}  // namespace bankucb
