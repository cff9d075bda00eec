#pragma once

#include <stdexcept>
#include <vector>

#include "bankucb/context.hpp"

namespace bankucb {

class InfeasibleGrid : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Batch endpoints 0 = t_0 < t_1 < ... < t_M = T.
///
/// Batch m (1-based) covers rounds t_{m-1}+1 .. t_m. `gamma` and `scale` are
/// the exponent and multiplier of the geometric recursion that produced the
/// grid; they are informational for grids built by hand.
struct BatchGrid {
  std::vector<Round> endpoints;
  double gamma = 0.0;
  double scale = 0.0;

  int num_batches() const { return static_cast<int>(endpoints.size()) - 1; }
  Round horizon() const { return endpoints.back(); }
  Round batch_start(int m) const { return endpoints[static_cast<std::size_t>(m - 1)]; }
  Round batch_end(int m) const { return endpoints[static_cast<std::size_t>(m)]; }
  /// Batch index (1-based) that contains round t.
  int batch_of(Round t) const;
};

/// Schedule exponent (1 + alpha) / (2 + d), alpha in (0, 1].
double grid_gamma(double alpha, int dim);

/// Geometric grid t_1 = floor(a d), t_m = floor(a t_{m-1}^gamma), with a the
/// smallest value on a fixed log-spaced lattice (relative spacing below 1e-6)
/// for which t_M reaches T; t_M is then clamped to T. The lattice does not
/// depend on T, so every endpoint is nondecreasing in T.
BatchGrid make_grid(Round horizon, int num_batches, double alpha, int dim);

/// One round per batch: 0, 1, ..., T.
BatchGrid sequential_grid(Round horizon);

bool validate_grid(const BatchGrid& grid, Round horizon);

/// Endpoints t_1..t_M generated by the recursion for a given scale, before
/// clamping.
std::vector<double> grid_recursion(double scale, double gamma, int num_batches, int dim);

}  // namespace bankucb
