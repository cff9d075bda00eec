#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bankucb/environment.hpp"
#include "bankucb/policy.hpp"

namespace bankucb {

/// Dyadic cube of side 2^-level inside [0, 1]^d.
struct BinId {
  int level = 0;
  std::vector<std::int64_t> cell;

  friend auto operator<=>(const BinId&, const BinId&) = default;
  friend bool operator==(const BinId&, const BinId&) = default;
  bool contains(const BinId& child) const;
};

/// Cell of a point of [0, 1]^d at a refinement level. Cells are half-open
/// [lo, hi) along each axis, except that 1.0 belongs to the last cell.
BinId bin_of(std::span<const double> unit_x, int level);

struct BinseConfig {
  double lipschitz = 1.0;
  double sigma = 0.5;
  int num_arms = 2;
  int dim = 1;
  std::uint64_t tie_seed = 0;
  /// Box mapped affinely onto [0, 1]^d before binning.
  Box support;
};

/// Batched successive elimination over dyadic bins that refine at batch
/// boundaries.
///
/// Bin level for batch m is ceil(log2(t_m) / (d + 2)), so the side length
/// tracks t_m^(-1/(d+2)). Inside a bin the active arm with the fewest plays
/// is pulled. At each commit an arm is dropped from a bin when its upper
/// bound plus the within-bin bias slack 2 L sqrt(d) 2^-level is below some
/// other arm's lower bound; surviving bins then split to the next level and
/// their children start fresh statistics with the parent's active set.
class BinsePolicy final : public BatchedPolicy {
public:
  struct Bin {
    std::vector<ArmId> active;
    std::vector<std::int64_t> plays;
    std::vector<std::int64_t> count;
    std::vector<double> sum;
    int child_level = -1;  // >= 0 once split
  };

  BinsePolicy(BinseConfig cfg, BatchGrid grid);

  std::string name() const override { return "binse"; }
  const BinseConfig& config() const { return cfg_; }

  /// Level used for batch m (1-based).
  int level_for_batch(int m) const { return levels_[static_cast<std::size_t>(m - 1)]; }
  const std::vector<int>& level_schedule() const { return levels_; }
  /// Leaf bin a context is routed to in the current batch.
  BinId route(const Context& x) const;
  const Bin* find(const BinId& id) const;
  const std::map<BinId, Bin>& bins() const { return bins_; }
  std::span<const double> unit(const Context& x, std::vector<double>& scratch) const;
  /// Half-width sqrt(2 sigma^2 ln(2 K M T) / n).
  double confidence_width(std::int64_t n) const;
  double bias_slack(int level) const;

protected:
  ArmId choose(const Context& x) override;
  void absorb(const std::vector<Sample>& batch) override;

private:
  Bin& leaf(const Context& x, BinId* id_out);
  void eliminate(Bin& bin, int level);

  BinseConfig cfg_;
  std::vector<int> levels_;
  std::map<BinId, Bin> bins_;
  double log_term_ = 0.0;
};

}  // namespace bankucb
