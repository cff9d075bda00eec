#include "bankucb/batch_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bankucb {

namespace {

constexpr double kLogScaleLow = -6.907755278982137;  // ln(1e-3)
constexpr double kLogScaleHigh = 23.025850929940457;  // ln(1e10)
constexpr int kBisectionSteps = 48;  // lattice step 30 / 2^48 in log-scale

bool reaches(double scale, double gamma, int num_batches, int dim, Round horizon) {
  return grid_recursion(scale, gamma, num_batches, dim).back() >= static_cast<double>(horizon);
}

}  // namespace

int BatchGrid::batch_of(Round t) const {
  auto it = std::lower_bound(endpoints.begin() + 1, endpoints.end(), t);
  if (t <= 0 || it == endpoints.end()) {
    throw std::out_of_range("round " + std::to_string(t) + " outside the grid");
  }
  return static_cast<int>(it - endpoints.begin());
}

double grid_gamma(double alpha, int dim) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("margin exponent alpha must lie in (0, 1]");
  }
  if (dim < 1) throw std::domain_error("dimension must be at least 1");
  return (1.0 + alpha) / (2.0 + static_cast<double>(dim));
}

std::vector<double> grid_recursion(double scale, double gamma, int num_batches, int dim) {
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(num_batches));
  t.push_back(std::floor(scale * static_cast<double>(dim)));
  for (int m = 2; m <= num_batches; ++m) t.push_back(std::floor(scale * std::pow(t.back(), gamma)));
  return t;
}

BatchGrid make_grid(Round horizon, int num_batches, double alpha, int dim) {
  const double gamma = grid_gamma(alpha, dim);
  if (num_batches < 1) throw InfeasibleGrid("number of batches must be at least 1");
  if (horizon < 2 * static_cast<Round>(num_batches)) {
    throw InfeasibleGrid("horizon " + std::to_string(horizon) + " is shorter than 2M = " +
                         std::to_string(2 * num_batches));
  }
  if (num_batches == 1) {
    return BatchGrid{{0, horizon}, gamma, static_cast<double>(horizon) / dim};
  }

  double lo = kLogScaleLow;
  double hi = kLogScaleHigh;
  if (reaches(std::exp(lo), gamma, num_batches, dim, horizon) ||
      !reaches(std::exp(hi), gamma, num_batches, dim, horizon)) {
    throw InfeasibleGrid("no grid scale in [1e-3, 1e10] brackets horizon " +
                         std::to_string(horizon));
  }
  for (int step = 0; step < kBisectionSteps; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (reaches(std::exp(mid), gamma, num_batches, dim, horizon)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  BatchGrid grid;
  grid.gamma = gamma;
  grid.scale = std::exp(hi);
  grid.endpoints.push_back(0);
  for (double t : grid_recursion(grid.scale, gamma, num_batches, dim)) {
    grid.endpoints.push_back(static_cast<Round>(t));
  }
  grid.endpoints.back() = horizon;
  if (!validate_grid(grid, horizon)) {
    std::string ends;
    for (Round t : grid.endpoints) ends += " " + std::to_string(t);
    throw InfeasibleGrid("grid endpoints are not strictly increasing for T=" +
                         std::to_string(horizon) + ", M=" + std::to_string(num_batches) +
                         ", d=" + std::to_string(dim) + ":" + ends);
  }
  return grid;
}

BatchGrid sequential_grid(Round horizon) {
  if (horizon < 1) throw InfeasibleGrid("horizon must be positive");
  BatchGrid grid;
  grid.endpoints.resize(static_cast<std::size_t>(horizon) + 1);
  for (Round t = 0; t <= horizon; ++t) grid.endpoints[static_cast<std::size_t>(t)] = t;
  grid.gamma = 0.0;
  grid.scale = 1.0;
  return grid;
}

bool validate_grid(const BatchGrid& grid, Round horizon) {
  const auto& e = grid.endpoints;
  if (e.size() < 2 || e.front() != 0 || e.back() != horizon) return false;
  return std::adjacent_find(e.begin(), e.end(), [](Round a, Round b) { return b <= a; }) == e.end();
}

}  // namespace bankucb
