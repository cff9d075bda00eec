#include "bankucb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bankucb {

void RegretTrace::append(TraceStep step) {
  step.cum_regret = final_regret() + step.inst_regret;
  steps.push_back(std::move(step));
}

double instantaneous_regret(const Environment& env, const Arrival& arrival, ArmId arm) {
  return env.optimal_value(arrival) - env.mean_reward(arm, arrival);
}

RegretTable per_arm_batch_regret(const RegretTrace& trace, int num_arms, int num_batches) {
  RegretTable table(static_cast<std::size_t>(num_arms),
                    std::vector<double>(static_cast<std::size_t>(num_batches), 0.0));
  for (const auto& s : trace.steps) {
    if (s.chosen < 0 || s.chosen >= num_arms || s.batch < 1 || s.batch > num_batches) {
      throw std::out_of_range("trace step at t=" + std::to_string(s.t) +
                              " has arm or batch outside the table");
    }
    table[static_cast<std::size_t>(s.chosen)][static_cast<std::size_t>(s.batch - 1)] +=
        s.inst_regret;
  }
  return table;
}

double table_total(const RegretTable& table) {
  double total = 0.0;
  for (const auto& row : table) {
    for (double v : row) total += v;
  }
  return total;
}

Series rolling_error(const RegretTrace& trace, Round window) {
  if (window <= 0) throw std::invalid_argument("rolling window must be positive");
  const auto n = static_cast<Round>(trace.steps.size());
  if (window > n) throw std::invalid_argument("rolling window exceeds trace length");
  Series out;
  out.reserve(static_cast<std::size_t>(n - window + 1));
  Round wrong = 0;
  for (Round i = 0; i < n; ++i) {
    const auto& s = trace.steps[static_cast<std::size_t>(i)];
    wrong += s.chosen != s.optimal;
    if (i >= window) {
      const auto& old = trace.steps[static_cast<std::size_t>(i - window)];
      wrong -= old.chosen != old.optimal;
    }
    if (i + 1 >= window) {
      out.push_back({s.t, static_cast<double>(wrong) / static_cast<double>(window)});
    }
  }
  return out;
}

Series cumulative_at(const RegretTrace& trace, const std::vector<Round>& checkpoints) {
  Series out;
  out.reserve(checkpoints.size());
  for (Round t : checkpoints) {
    if (t < 1 || t > static_cast<Round>(trace.steps.size())) {
      throw std::out_of_range("checkpoint " + std::to_string(t) + " outside the trace");
    }
    out.push_back({t, trace.steps[static_cast<std::size_t>(t - 1)].cum_regret});
  }
  return out;
}

Series sample_series(const Series& series, const std::vector<Round>& checkpoints) {
  Series out;
  for (Round t : checkpoints) {
    const auto it = std::lower_bound(series.begin(), series.end(), t,
                                     [](const SeriesPoint& p, Round r) { return p.t < r; });
    if (it != series.end() && it->t == t) out.push_back(*it);
  }
  return out;
}

namespace {

void check_aligned(const std::vector<Series>& runs) {
  if (runs.empty()) throw std::invalid_argument("no runs to aggregate");
  for (const auto& r : runs) {
    if (r.size() != runs.front().size()) throw std::invalid_argument("ragged run series");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].t != runs.front()[i].t) throw std::invalid_argument("runs disagree on checkpoints");
    }
  }
}

// Values at one checkpoint in sorted order, so sums do not depend on run order.
std::vector<double> column(const std::vector<Series>& runs, std::size_t i) {
  std::vector<double> values;
  values.reserve(runs.size());
  for (const auto& r : runs) values.push_back(r[i].value);
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace

SummarySeries mean_series(const std::vector<Series>& runs) {
  check_aligned(runs);
  SummarySeries out;
  const double n = static_cast<double>(runs.size());
  for (std::size_t i = 0; i < runs.front().size(); ++i) {
    double sum = 0.0;
    for (double v : column(runs, i)) sum += v;
    out.checkpoints.push_back(runs.front()[i].t);
    out.mean.push_back(sum / n);
  }
  return out;
}

SummarySeries aggregate_runs(const std::vector<Series>& runs) {
  if (runs.size() < 2) throw std::invalid_argument("standard error needs at least two runs");
  SummarySeries out = mean_series(runs);
  const double n = static_cast<double>(runs.size());
  for (std::size_t i = 0; i < out.mean.size(); ++i) {
    double ss = 0.0;
    for (double v : column(runs, i)) ss += (v - out.mean[i]) * (v - out.mean[i]);
    out.half_width.push_back(1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n));
  }
  return out;
}

std::vector<Round> checkpoint_rounds(Round horizon, Round stride) {
  if (stride <= 0) throw std::invalid_argument("checkpoint stride must be positive");
  std::vector<Round> out;
  for (Round t = stride; t < horizon; t += stride) out.push_back(t);
  if (horizon > 0) out.push_back(horizon);
  return out;
}

}  // namespace bankucb
