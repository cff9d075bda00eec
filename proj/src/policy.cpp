#include "bankucb/policy.hpp"

#include <algorithm>
#include <numeric>

namespace bankucb {

BatchedPolicy::BatchedPolicy(BatchGrid grid, int num_arms, std::uint64_t tie_seed)
    : grid_(std::move(grid)), num_arms_(num_arms), ties_(tie_seed) {
  if (num_arms < 2) throw std::invalid_argument("a bandit needs at least two arms");
  if (!validate_grid(grid_, grid_.horizon())) throw InfeasibleGrid("invalid batch grid");
}

ArmId BatchedPolicy::select_action(const Context& x) {
  if (finished()) throw BatchViolation("horizon exhausted");
  if (round_ >= grid_.batch_end(batch_)) {
    throw BatchViolation("batch " + std::to_string(batch_) + " ended at round " +
                         std::to_string(grid_.batch_end(batch_)) + "; commit before continuing");
  }
  const ArmId arm = choose(x);
  ++round_;
  return arm;
}

void BatchedPolicy::record(const Sample& s) {
  if (finished()) throw BatchViolation("horizon exhausted");
  const Round lo = grid_.batch_start(batch_);
  const Round hi = grid_.batch_end(batch_);
  if (s.time <= lo || s.time > hi) {
    throw BatchViolation("sample time " + std::to_string(s.time) + " outside batch " +
                         std::to_string(batch_) + " (" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
  if (s.arm < 0 || s.arm >= num_arms_) throw std::out_of_range("arm outside [0, K)");
  pending_.push_back(s);
}

void BatchedPolicy::commit_batch() {
  if (finished()) throw BatchViolation("horizon exhausted");
  if (round_ != grid_.batch_end(batch_)) {
    throw BatchViolation("commit at round " + std::to_string(round_) + " but batch " +
                         std::to_string(batch_) + " ends at " +
                         std::to_string(grid_.batch_end(batch_)));
  }
  std::sort(pending_.begin(), pending_.end(),
            [](const Sample& a, const Sample& b) { return a.time < b.time; });
  absorb(pending_);
  pending_.clear();
  ++batch_;
}

ArmId BatchedPolicy::break_tie(const std::vector<ArmId>& candidates) {
  if (candidates.size() == 1) return candidates.front();
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return candidates[pick(ties_)];
}

UniformRandomPolicy::UniformRandomPolicy(BatchGrid grid, int num_arms, std::uint64_t tie_seed)
    : BatchedPolicy(std::move(grid), num_arms, tie_seed),
      all_arms_(static_cast<std::size_t>(num_arms)) {
  std::iota(all_arms_.begin(), all_arms_.end(), 0);
}

ArmId UniformRandomPolicy::choose(const Context&) { return break_tie(all_arms_); }

}  // namespace bankucb
