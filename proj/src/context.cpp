#include "bankucb/context.hpp"

#include <cmath>

namespace bankucb {

DimensionError::DimensionError(std::size_t expected, std::size_t got)
    : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                            ", got " + std::to_string(got)),
      expected_(expected),
      got_(got) {}

Context::Context(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("context must have at least one coordinate");
  for (double v : coords_) {
    if (!std::isfinite(v)) throw std::invalid_argument("context coordinates must be finite");
  }
}

Context::Context(std::initializer_list<double> coords) : Context(std::vector<double>(coords)) {}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace bankucb
