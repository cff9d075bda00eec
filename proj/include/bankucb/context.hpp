#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bankucb {

/// Thrown when a context, sample or environment disagrees on the dimension d.
class DimensionError : public std::invalid_argument {
public:
  DimensionError(std::size_t expected, std::size_t got);
  std::size_t expected() const { return expected_; }
  std::size_t got() const { return got_; }

private:
  std::size_t expected_;
  std::size_t got_;
};

/// Raised when a policy is asked to accept feedback or update outside the
/// batch it is currently in.
class BatchViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A point in R^d observed before an arm is chosen. Entries are finite.
class Context {
public:
  Context() = default;
  explicit Context(std::vector<double> coords);
  Context(std::initializer_list<double> coords);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }
  const std::vector<double>& vector() const { return coords_; }

  friend bool operator==(const Context&, const Context&) = default;

private:
  std::vector<double> coords_;
};

using ArmId = int;
using Round = std::int64_t;

/// One observation in a policy history.
struct Sample {
  Context context;
  ArmId arm = 0;
  double reward = 0.0;
  Round time = 0;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace bankucb
