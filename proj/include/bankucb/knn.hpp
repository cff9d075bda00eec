#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bankucb/context.hpp"

namespace bankucb {

/// A k-NN query asked for more neighbors than the arm has stored.
class InsufficientSamples : public std::out_of_range {
public:
  InsufficientSamples(std::size_t requested, std::size_t available);
  std::size_t requested() const { return requested_; }
  std::size_t available() const { return available_; }

private:
  std::size_t requested_;
  std::size_t available_;
};

/// Per-arm sample storage queried by exact Euclidean nearest-neighbor search.
///
/// Samples must arrive in strictly increasing time order across all arms, so
/// time indices are unique. The horizon is the last round whose feedback the
/// history is allowed to contain; it only moves forward.
class ArmHistory {
public:
  ArmHistory(std::size_t dim, int num_arms);

  void insert(const Sample& s);
  void freeze(Round horizon);

  std::size_t dim() const { return dim_; }
  int num_arms() const { return static_cast<int>(arms_.size()); }
  Round horizon() const { return horizon_; }
  std::size_t count(ArmId arm) const { return arm_store(arm).times.size(); }
  std::size_t size() const;

  /// Flat row-major contexts of one arm (count(arm) x dim()).
  std::span<const double> contexts(ArmId arm) const { return arm_store(arm).coords; }
  std::span<const double> rewards(ArmId arm) const { return arm_store(arm).rewards; }
  std::span<const Round> times(ArmId arm) const { return arm_store(arm).times; }

private:
  struct Store {
    std::vector<double> coords;
    std::vector<double> rewards;
    std::vector<Round> times;
  };
  const Store& arm_store(ArmId arm) const;

  std::size_t dim_;
  std::vector<Store> arms_;
  Round last_time_ = 0;
  Round horizon_ = 0;
};

struct Neighbor {
  double distance = 0.0;
  Round time = 0;
  double reward = 0.0;
};

/// Neighbors of one query point ordered by (distance, time). The sorted
/// prefix is extended lazily with partial selection, so asking for the first
/// few neighbors costs one distance pass plus a small sort.
class NeighborQuery {
public:
  NeighborQuery(const ArmHistory& history, const Context& x, ArmId arm);

  std::size_t available() const { return pool_.size(); }
  /// j-th nearest neighbor, 1-based.
  const Neighbor& nearest(std::size_t j);

private:
  void ensure_sorted(std::size_t count);

  std::vector<Neighbor> pool_;
  std::size_t sorted_ = 0;
};

struct NeighborStats {
  double mean = 0.0;
  double radius = 0.0;
};

/// The j smallest distances from x to arm samples, nondecreasing.
std::vector<double> knn_distances(const ArmHistory& history, const Context& x, ArmId arm,
                                  std::size_t j);

/// Largest j with L * d_j <= sqrt(ln(t_prev) / j). Empty when the arm has no
/// data, when t_prev < 2, or when even the nearest sample is too far
/// (L * d_1 > sqrt(ln t_prev)); callers treat that as an infinite UCB.
std::optional<std::size_t> adaptive_k(NeighborQuery& query, double lipschitz, Round t_prev);
std::optional<std::size_t> adaptive_k(const ArmHistory& history, const Context& x, ArmId arm,
                                      double lipschitz, Round t_prev);
/// Same rule applied to an already sorted distance list.
std::optional<std::size_t> adaptive_k(std::span<const double> sorted_distances, double lipschitz,
                                      Round t_prev);

NeighborStats neighbor_stats(NeighborQuery& query, std::size_t k);
NeighborStats neighbor_stats(const ArmHistory& history, const Context& x, ArmId arm,
                             std::size_t k);

}  // namespace bankucb
