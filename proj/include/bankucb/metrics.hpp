#pragma once

#include <vector>

#include "bankucb/context.hpp"
#include "bankucb/environment.hpp"

namespace bankucb {

struct TraceStep {
  Round t = 0;
  int batch = 0;
  std::vector<double> context;
  ArmId chosen = 0;
  ArmId optimal = 0;
  double reward = 0.0;
  double inst_regret = 0.0;
  double cum_regret = 0.0;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

/// Round-by-round record of one run; cum_regret is the running sum of
/// inst_regret.
struct RegretTrace {
  int run = 0;
  std::vector<TraceStep> steps;

  void append(TraceStep step);
  double final_regret() const { return steps.empty() ? 0.0 : steps.back().cum_regret; }
  friend bool operator==(const RegretTrace&, const RegretTrace&) = default;
};

/// f_*(x) - f_a(x).
double instantaneous_regret(const Environment& env, const Arrival& arrival, ArmId arm);

/// Regret summed per (arm, batch); table[arm][batch - 1].
using RegretTable = std::vector<std::vector<double>>;
RegretTable per_arm_batch_regret(const RegretTrace& trace, int num_arms, int num_batches);
double table_total(const RegretTable& table);

struct SeriesPoint {
  Round t = 0;
  double value = 0.0;
  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};
using Series = std::vector<SeriesPoint>;

/// Fraction of rounds in (t - window, t] where the chosen arm was not the
/// optimal one, for every t >= window.
Series rolling_error(const RegretTrace& trace, Round window);

/// Cumulative regret sampled at the given rounds.
Series cumulative_at(const RegretTrace& trace, const std::vector<Round>& checkpoints);
/// Subset of a series at the given rounds (rounds missing from the series are skipped).
Series sample_series(const Series& series, const std::vector<Round>& checkpoints);

struct SummarySeries {
  std::vector<Round> checkpoints;
  std::vector<double> mean;
  /// 1.96 * sample std / sqrt(runs).
  std::vector<double> half_width;
};

/// Pointwise mean and normal-approximation band over at least two runs that
/// share one checkpoint set.
SummarySeries aggregate_runs(const std::vector<Series>& runs);
/// Pointwise mean only; valid for a single run.
SummarySeries mean_series(const std::vector<Series>& runs);

/// Rounds stride, 2 stride, ... plus T itself.
std::vector<Round> checkpoint_rounds(Round horizon, Round stride);

}  // namespace bankucb
