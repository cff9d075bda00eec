#include "bankucb/knn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bankucb {

namespace {

bool neighbor_less(const Neighbor& a, const Neighbor& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.time < b.time;
}

// The feasible set of the neighbor-count rule is a prefix of 1..n because
// d_j is nondecreasing while sqrt(ln t / j) is decreasing, so the scan stops
// at the first failure.
template <typename DistanceAt>
std::optional<std::size_t> scan_adaptive_k(std::size_t n, double lipschitz, Round t_prev,
                                           DistanceAt distance_at) {
  if (n == 0 || t_prev < 2) return std::nullopt;
  const double log_t = std::log(static_cast<double>(t_prev));
  if (lipschitz * distance_at(1) > std::sqrt(log_t)) return std::nullopt;
  std::size_t k = 1;
  while (k < n) {
    const std::size_t j = k + 1;
    if (lipschitz * distance_at(j) > std::sqrt(log_t / static_cast<double>(j))) break;
    k = j;
  }
  return k;
}

}  // namespace

InsufficientSamples::InsufficientSamples(std::size_t requested, std::size_t available)
    : std::out_of_range("requested " + std::to_string(requested) + " neighbors but only " +
                        std::to_string(available) + " samples are stored"),
      requested_(requested),
      available_(available) {}

ArmHistory::ArmHistory(std::size_t dim, int num_arms) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("dimension must be at least 1");
  if (num_arms < 1) throw std::invalid_argument("need at least one arm");
  arms_.resize(static_cast<std::size_t>(num_arms));
}

const ArmHistory::Store& ArmHistory::arm_store(ArmId arm) const {
  if (arm < 0 || arm >= num_arms()) {
    throw std::out_of_range("arm " + std::to_string(arm) + " outside [0, " +
                            std::to_string(num_arms()) + ")");
  }
  return arms_[static_cast<std::size_t>(arm)];
}

void ArmHistory::insert(const Sample& s) {
  if (s.context.dim() != dim_) throw DimensionError(dim_, s.context.dim());
  arm_store(s.arm);
  if (s.time <= last_time_) {
    throw std::invalid_argument("sample time " + std::to_string(s.time) +
                                " is not after the latest stored time " +
                                std::to_string(last_time_));
  }
  auto& store = arms_[static_cast<std::size_t>(s.arm)];
  store.coords.insert(store.coords.end(), s.context.coords().begin(), s.context.coords().end());
  store.rewards.push_back(s.reward);
  store.times.push_back(s.time);
  last_time_ = s.time;
  horizon_ = std::max(horizon_, s.time);
}

void ArmHistory::freeze(Round horizon) {
  if (horizon < horizon_) {
    throw std::invalid_argument("frozen horizon cannot move backwards (" +
                                std::to_string(horizon) + " < " + std::to_string(horizon_) + ")");
  }
  horizon_ = horizon;
}

std::size_t ArmHistory::size() const {
  std::size_t total = 0;
  for (const auto& s : arms_) total += s.times.size();
  return total;
}

NeighborQuery::NeighborQuery(const ArmHistory& history, const Context& x, ArmId arm) {
  if (x.dim() != history.dim()) throw DimensionError(history.dim(), x.dim());
  const auto coords = history.contexts(arm);
  const auto rewards = history.rewards(arm);
  const auto times = history.times(arm);
  const std::size_t d = history.dim();
  pool_.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    pool_[i] = Neighbor{euclidean_distance(coords.subspan(i * d, d), x.coords()), times[i],
                        rewards[i]};
  }
}

void NeighborQuery::ensure_sorted(std::size_t count) {
  if (count <= sorted_) return;
  const std::size_t n = pool_.size();
  const std::size_t target = std::min(n, std::max({count, 2 * sorted_, std::size_t{16}}));
  auto first = pool_.begin() + static_cast<std::ptrdiff_t>(sorted_);
  auto mid = pool_.begin() + static_cast<std::ptrdiff_t>(target);
  if (target < n) std::nth_element(first, mid, pool_.end(), neighbor_less);
  std::sort(first, mid, neighbor_less);
  sorted_ = target;
}

const Neighbor& NeighborQuery::nearest(std::size_t j) {
  if (j == 0 || j > pool_.size()) throw InsufficientSamples(j, pool_.size());
  ensure_sorted(j);
  return pool_[j - 1];
}

std::vector<double> knn_distances(const ArmHistory& history, const Context& x, ArmId arm,
                                  std::size_t j) {
  NeighborQuery query(history, x, arm);
  if (j > query.available()) throw InsufficientSamples(j, query.available());
  std::vector<double> out;
  out.reserve(j);
  for (std::size_t i = 1; i <= j; ++i) out.push_back(query.nearest(i).distance);
  return out;
}

std::optional<std::size_t> adaptive_k(NeighborQuery& query, double lipschitz, Round t_prev) {
  return scan_adaptive_k(query.available(), lipschitz, t_prev,
                         [&](std::size_t j) { return query.nearest(j).distance; });
}

std::optional<std::size_t> adaptive_k(const ArmHistory& history, const Context& x, ArmId arm,
                                      double lipschitz, Round t_prev) {
  NeighborQuery query(history, x, arm);
  return adaptive_k(query, lipschitz, t_prev);
}

std::optional<std::size_t> adaptive_k(std::span<const double> sorted_distances, double lipschitz,
                                      Round t_prev) {
  return scan_adaptive_k(sorted_distances.size(), lipschitz, t_prev,
                         [&](std::size_t j) { return sorted_distances[j - 1]; });
}

NeighborStats neighbor_stats(NeighborQuery& query, std::size_t k) {
  if (k == 0 || k > query.available()) throw InsufficientSamples(k, query.available());
  double sum = 0.0;
  for (std::size_t j = 1; j <= k; ++j) sum += query.nearest(j).reward;
  return NeighborStats{sum / static_cast<double>(k), query.nearest(k).distance};
}

NeighborStats neighbor_stats(const ArmHistory& history, const Context& x, ArmId arm,
                             std::size_t k) {
  NeighborQuery query(history, x, arm);
  return neighbor_stats(query, k);
}

}  // namespace bankucb
