#include "bankucb/binse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bankucb {

namespace {
constexpr int kMaxLevel = 40;
}

bool BinId::contains(const BinId& child) const {
  if (child.level < level || child.cell.size() != cell.size()) return false;
  const int shift = child.level - level;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if ((child.cell[i] >> shift) != cell[i]) return false;
  }
  return true;
}

BinId bin_of(std::span<const double> unit_x, int level) {
  if (level < 0 || level > kMaxLevel) throw std::domain_error("bin level out of range");
  const auto cells = std::int64_t{1} << level;
  BinId id{level, {}};
  id.cell.reserve(unit_x.size());
  for (double v : unit_x) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("bin coordinates must lie in [0, 1]");
    const auto c = static_cast<std::int64_t>(std::floor(v * static_cast<double>(cells)));
    id.cell.push_back(std::min(c, cells - 1));
  }
  return id;
}

BinsePolicy::BinsePolicy(BinseConfig cfg, BatchGrid grid)
    : BatchedPolicy(std::move(grid), cfg.num_arms, cfg.tie_seed), cfg_(std::move(cfg)) {
  if (!(cfg_.lipschitz > 0.0)) throw std::invalid_argument("Lipschitz constant must be positive");
  if (!(cfg_.sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  const auto d = static_cast<std::size_t>(cfg_.dim);
  if (cfg_.support.lower.empty()) {
    cfg_.support = Box{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  }
  if (cfg_.support.lower.size() != d || cfg_.support.upper.size() != d) {
    throw DimensionError(d, cfg_.support.lower.size());
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(cfg_.support.upper[i] > cfg_.support.lower[i])) {
      throw std::invalid_argument("support box must have positive width");
    }
  }
  const auto& g = this->grid();
  for (int m = 1; m <= g.num_batches(); ++m) {
    const double t = static_cast<double>(g.batch_end(m));
    const int level = static_cast<int>(std::ceil(std::log2(t) / (cfg_.dim + 2.0)));
    levels_.push_back(std::clamp(level, 0, kMaxLevel));
  }
  log_term_ = std::log(2.0 * cfg_.num_arms * g.num_batches() * static_cast<double>(g.horizon()));
}

std::span<const double> BinsePolicy::unit(const Context& x, std::vector<double>& scratch) const {
  if (x.dim() != static_cast<std::size_t>(cfg_.dim)) throw DimensionError(cfg_.dim, x.dim());
  scratch.resize(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double lo = cfg_.support.lower[i];
    const double hi = cfg_.support.upper[i];
    scratch[i] = (x[i] - lo) / (hi - lo);
  }
  return scratch;
}

double BinsePolicy::confidence_width(std::int64_t n) const {
  return std::sqrt(2.0 * cfg_.sigma * cfg_.sigma * log_term_ / static_cast<double>(n));
}

double BinsePolicy::bias_slack(int level) const {
  return 2.0 * cfg_.lipschitz * std::sqrt(static_cast<double>(cfg_.dim)) * std::ldexp(1.0, -level);
}

BinId BinsePolicy::route(const Context& x) const {
  std::vector<double> scratch;
  const auto u = unit(x, scratch);
  BinId id = bin_of(u, levels_.front());
  for (auto it = bins_.find(id); it != bins_.end() && it->second.child_level >= 0;
       it = bins_.find(id)) {
    id = bin_of(u, it->second.child_level);
  }
  return id;
}

const BinsePolicy::Bin* BinsePolicy::find(const BinId& id) const {
  const auto it = bins_.find(id);
  return it == bins_.end() ? nullptr : &it->second;
}

BinsePolicy::Bin& BinsePolicy::leaf(const Context& x, BinId* id_out) {
  std::vector<double> scratch;
  const auto u = unit(x, scratch);
  const auto k = static_cast<std::size_t>(cfg_.num_arms);
  BinId id = bin_of(u, levels_.front());
  std::vector<ArmId> inherited(k);
  std::iota(inherited.begin(), inherited.end(), 0);
  while (true) {
    auto it = bins_.find(id);
    if (it == bins_.end()) {
      Bin fresh;
      fresh.active = inherited;
      fresh.plays.assign(k, 0);
      fresh.count.assign(k, 0);
      fresh.sum.assign(k, 0.0);
      it = bins_.emplace(id, std::move(fresh)).first;
    }
    if (it->second.child_level < 0) {
      if (id_out) *id_out = id;
      return it->second;
    }
    inherited = it->second.active;
    id = bin_of(u, it->second.child_level);
  }
}

ArmId BinsePolicy::choose(const Context& x) {
  Bin& bin = leaf(x, nullptr);
  std::vector<ArmId> least;
  std::int64_t fewest = 0;
  for (ArmId a : bin.active) {
    const auto n = bin.plays[static_cast<std::size_t>(a)];
    if (least.empty() || n < fewest) {
      least.assign(1, a);
      fewest = n;
    } else if (n == fewest) {
      least.push_back(a);
    }
  }
  const ArmId arm = break_tie(least);
  ++bin.plays[static_cast<std::size_t>(arm)];
  return arm;
}

void BinsePolicy::eliminate(Bin& bin, int level) {
  if (bin.active.size() < 2) return;
  for (ArmId a : bin.active) {
    if (bin.count[static_cast<std::size_t>(a)] == 0) return;
  }
  auto mean = [&](ArmId a) {
    const auto i = static_cast<std::size_t>(a);
    return bin.sum[i] / static_cast<double>(bin.count[i]);
  };
  auto width = [&](ArmId a) { return confidence_width(bin.count[static_cast<std::size_t>(a)]); };

  double best_lower = -std::numeric_limits<double>::infinity();
  for (ArmId a : bin.active) best_lower = std::max(best_lower, mean(a) - width(a));
  const double slack = bias_slack(level);
  std::vector<ArmId> survivors;
  for (ArmId a : bin.active) {
    if (!(mean(a) + width(a) + slack < best_lower)) survivors.push_back(a);
  }
  bin.active = std::move(survivors);
}

void BinsePolicy::absorb(const std::vector<Sample>& batch) {
  std::vector<BinId> touched;
  for (const auto& s : batch) {
    BinId id;
    Bin& bin = leaf(s.context, &id);
    const auto a = static_cast<std::size_t>(s.arm);
    ++bin.count[a];
    bin.sum[a] += s.reward;
    touched.push_back(std::move(id));
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (const auto& id : touched) eliminate(bins_.at(id), id.level);

  const int m = batch_index();
  if (m >= grid().num_batches()) return;
  const int next_level = level_for_batch(m + 1);
  for (auto& [id, bin] : bins_) {
    if (bin.child_level >= 0 || bin.active.size() < 2) continue;
    if (next_level > id.level) bin.child_level = next_level;
  }
}

}  // namespace bankucb
