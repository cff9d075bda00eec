#include <cmath>
#include <random>

#include "doctest.h"

#include "bankucb/batch_schedule.hpp"

using namespace bankucb;

namespace {

// Independent re-evaluation of the recursion, used to confirm the scale the
// bisection picked is (nearly) the smallest one reaching the horizon.
double last_endpoint(double a, double gamma, int M, int d) {
  double t = std::floor(a * d);
  for (int m = 2; m <= M; ++m) t = std::floor(a * std::pow(t, gamma));
  return t;
}

}  // namespace

TEST_CASE("schedule exponent") {
  CHECK(grid_gamma(1.0, 2) == doctest::Approx(0.5));
  CHECK(grid_gamma(1.0, 14) == doctest::Approx(0.125));
  CHECK(grid_gamma(0.5, 3) == doctest::Approx(0.3));
  CHECK_THROWS_AS(grid_gamma(0.0, 2), std::domain_error);
  CHECK_THROWS_AS(grid_gamma(1.5, 2), std::domain_error);
}

TEST_CASE("single batch grid") {
  const auto g = make_grid(1234, 1, 1.0, 3);
  CHECK(g.endpoints == std::vector<Round>{0, 1234});
}

TEST_CASE("desk-scale grid T=10000, M=5, d=2") {
  const auto g = make_grid(10000, 5, 1.0, 2);
  REQUIRE(g.endpoints.size() == 6);
  CHECK(validate_grid(g, 10000));
  CHECK(g.endpoints.back() == 10000);
  // Closed-form scale T^((1-gamma)/(1-gamma^M)) = 10000^(0.5/0.96875) ~ 116.
  const double closed = std::pow(10000.0, 0.5 / 0.96875);
  CHECK(g.scale > closed / 4.0);
  CHECK(g.scale < closed * 4.0);
  CHECK(last_endpoint(g.scale, g.gamma, 5, 2) >= 10000.0);
  CHECK(last_endpoint(g.scale * (1.0 - 1e-5), g.gamma, 5, 2) < 10000.0);
}

TEST_CASE("endpoint growth follows T^((1-gamma^m)/(1-gamma^M))") {
  const Round T = 1000000;
  const auto g = make_grid(T, 5, 1.0, 2);
  const double gamma = 0.5;
  for (int m = 2; m <= 4; ++m) {
    const double target = (1.0 - std::pow(gamma, m)) / (1.0 - std::pow(gamma, 5));
    const double actual = std::log(static_cast<double>(g.batch_end(m))) / std::log(1e6);
    CHECK(std::abs(actual - target) <= 0.15 * target);
  }
}

TEST_CASE("validate_grid") {
  CHECK(validate_grid(BatchGrid{{0, 5, 10}}, 10));
  CHECK_FALSE(validate_grid(BatchGrid{{0, 5, 5}}, 5));
  CHECK_FALSE(validate_grid(BatchGrid{{0, 5, 9}}, 10));
  CHECK_FALSE(validate_grid(BatchGrid{{1, 5, 10}}, 10));
  CHECK_FALSE(validate_grid(BatchGrid{{0}}, 0));
}

TEST_CASE("infeasible grids are rejected") {
  CHECK_THROWS_AS(make_grid(9, 5, 1.0, 2), InfeasibleGrid);
  CHECK_THROWS_AS(make_grid(10, 5, 1.0, 2), InfeasibleGrid);
  CHECK_THROWS_AS(make_grid(100, 0, 1.0, 2), InfeasibleGrid);
}

TEST_CASE("recursion holds exactly on produced grids") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Round> horizon(200, 200000);
  std::uniform_int_distribution<int> batches(2, 6);
  std::uniform_int_distribution<int> dim(1, 8);
  std::uniform_real_distribution<double> alpha(0.05, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Round T = horizon(rng);
    const int M = batches(rng);
    const int d = dim(rng);
    const double a = alpha(rng);
    BatchGrid g;
    try {
      g = make_grid(T, M, a, d);
    } catch (const InfeasibleGrid&) {
      continue;
    }
    ++checked;
    REQUIRE(validate_grid(g, T));
    CHECK(g.endpoints[1] == static_cast<Round>(std::floor(g.scale * d)));
    for (int m = 2; m <= M - 1; ++m) {
      const double prev = static_cast<double>(g.batch_end(m - 1));
      CHECK(g.batch_end(m) == static_cast<Round>(std::floor(g.scale * std::pow(prev, g.gamma))));
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("endpoints are nondecreasing in T") {
  for (int d : {1, 2, 5}) {
    std::vector<Round> prev;
    for (Round T = 60; T <= 6000; T += 7) {
      BatchGrid g;
      try {
        g = make_grid(T, 4, 1.0, d);
      } catch (const InfeasibleGrid&) {
        continue;
      }
      if (!prev.empty()) {
        for (int m = 1; m <= 4; ++m) CHECK(g.batch_end(m) >= prev[static_cast<std::size_t>(m)]);
      }
      prev = g.endpoints;
    }
  }
}

TEST_CASE("sequential grid and batch lookup") {
  const auto seq = sequential_grid(5);
  CHECK(seq.endpoints == std::vector<Round>{0, 1, 2, 3, 4, 5});
  CHECK(seq.batch_of(3) == 3);

  const BatchGrid g{{0, 4, 10, 25}};
  CHECK(g.batch_of(1) == 1);
  CHECK(g.batch_of(4) == 1);
  CHECK(g.batch_of(5) == 2);
  CHECK(g.batch_of(25) == 3);
  CHECK_THROWS(g.batch_of(26));
  CHECK_THROWS(g.batch_of(0));
}
