#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bankucb/batch_schedule.hpp"
#include "bankucb/context.hpp"
#include "bankucb/rng.hpp"

namespace bankucb {

/// A policy that only learns at batch boundaries.
///
/// The base class owns the batch clock: each select_action call consumes the
/// next round, feedback for the current batch is buffered by record, and
/// commit_batch hands the buffered samples (sorted by time) to the derived
/// policy once the last round of the batch has been played.
class BatchedPolicy {
public:
  BatchedPolicy(BatchGrid grid, int num_arms, std::uint64_t tie_seed);
  virtual ~BatchedPolicy() = default;

  virtual std::string name() const = 0;

  ArmId select_action(const Context& x);
  void record(const Sample& s);
  void commit_batch();

  const BatchGrid& grid() const { return grid_; }
  int num_arms() const { return num_arms_; }
  /// 1-based index of the batch being played.
  int batch_index() const { return batch_; }
  /// t_{m-1}: last round whose feedback the policy may use.
  Round frozen_horizon() const { return grid_.batch_start(batch_); }
  /// Last round for which an action was selected.
  Round round() const { return round_; }
  const std::vector<Sample>& pending() const { return pending_; }
  bool finished() const { return batch_ > grid_.num_batches(); }

protected:
  virtual ArmId choose(const Context& x) = 0;
  virtual void absorb(const std::vector<Sample>& batch) = 0;

  /// Uniform pick among candidate arms from the tie stream; a single
  /// candidate consumes no randomness.
  ArmId break_tie(const std::vector<ArmId>& candidates);

private:
  BatchGrid grid_;
  int num_arms_;
  int batch_ = 1;
  Round round_ = 0;
  std::vector<Sample> pending_;
  Rng ties_;
};

class UniformRandomPolicy final : public BatchedPolicy {
public:
  UniformRandomPolicy(BatchGrid grid, int num_arms, std::uint64_t tie_seed);
  std::string name() const override { return "uniform_random"; }

protected:
  ArmId choose(const Context& x) override;
  void absorb(const std::vector<Sample>&) override {}

private:
  std::vector<ArmId> all_arms_;
};

}  // namespace bankucb
