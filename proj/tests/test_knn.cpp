#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "bankucb/knn.hpp"

using namespace bankucb;

namespace {

ArmHistory history_from(const std::vector<oracle::Point>& pts, std::size_t dim, ArmId arm = 0) {
  ArmHistory h(dim, 2);
  for (const auto& p : pts) h.insert(Sample{Context(p.x), arm, p.reward, p.time});
  return h;
}

std::vector<oracle::Point> random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<oracle::Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(dim);
    for (auto& v : x) v = u(rng);
    pts.push_back({x, u(rng), static_cast<long long>(i + 1)});
  }
  return pts;
}

}  // namespace

TEST_CASE("insert into an empty history") {
  ArmHistory h(2, 2);
  h.insert(Sample{Context{0.0, 0.0}, 0, 1.0, 1});
  CHECK(h.count(0) == 1);
  CHECK(h.count(1) == 0);
  CHECK(h.horizon() == 1);
}

TEST_CASE("insert rejects repeated times and wrong dimensions") {
  ArmHistory h(2, 2);
  h.insert(Sample{Context{0.0, 0.0}, 0, 1.0, 1});
  CHECK_THROWS_AS(h.insert(Sample{Context{1.0, 0.0}, 1, 1.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(h.insert(Sample{Context{1.0, 0.0, 2.0}, 1, 1.0, 2}), DimensionError);
  CHECK_THROWS_AS(h.insert(Sample{Context{1.0, 0.0}, 2, 1.0, 3}), std::out_of_range);
  CHECK(h.size() == 1);
}

TEST_CASE("context rejects non-finite coordinates") {
  CHECK_THROWS(Context{0.0, std::numeric_limits<double>::quiet_NaN()});
  CHECK_THROWS(Context(std::vector<double>{}));
}

TEST_CASE("knn_distances small cases") {
  ArmHistory h(2, 2);
  h.insert(Sample{Context{0.0, 0.0}, 0, 0.0, 1});
  h.insert(Sample{Context{3.0, 4.0}, 0, 0.0, 2});
  CHECK(knn_distances(h, Context{0.0, 0.0}, 0, 2) == std::vector<double>{0.0, 5.0});

  ArmHistory single(2, 2);
  single.insert(Sample{Context{0.25, -0.5}, 1, 0.0, 1});
  CHECK(knn_distances(single, Context{0.25, -0.5}, 1, 1) == std::vector<double>{0.0});
}

TEST_CASE("insufficient samples carries the available count") {
  ArmHistory h(1, 2);
  h.insert(Sample{Context{0.0}, 0, 0.0, 1});
  try {
    knn_distances(h, Context{0.0}, 0, 3);
    FAIL("expected InsufficientSamples");
  } catch (const InsufficientSamples& e) {
    CHECK(e.available() == 1);
    CHECK(e.requested() == 3);
  }
  CHECK_THROWS_AS(neighbor_stats(h, Context{0.0}, 1, 1), InsufficientSamples);
}

TEST_CASE("knn_distances matches exhaustive sort on random data") {
  std::mt19937_64 rng(11);
  const auto pts = random_points(rng, 50, 2);
  const auto h = history_from(pts, 2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int q = 0; q < 20; ++q) {
    const std::vector<double> x{u(rng), u(rng)};
    const auto all = oracle::sorted_all(pts, x);
    std::vector<double> expected;
    for (int j = 0; j < 5; ++j) expected.push_back(std::get<0>(all[j]));
    CHECK(knn_distances(h, Context(x), 0, 5) == expected);
  }
}

TEST_CASE("100 inserts give the same answers as a flat rebuild") {
  std::mt19937_64 rng(5);
  const auto pts = random_points(rng, 100, 3);
  // Interleave two arms; the arm-0 subset is what the oracle sees.
  ArmHistory h(3, 2);
  std::vector<oracle::Point> arm0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const ArmId arm = i % 3 == 0 ? 1 : 0;
    h.insert(Sample{Context(pts[i].x), arm, pts[i].reward, pts[i].time});
    if (arm == 0) arm0.push_back(pts[i]);
  }
  const auto flat = history_from(arm0, 3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int q = 0; q < 30; ++q) {
    const Context x{u(rng), u(rng), u(rng)};
    const std::size_t n = arm0.size();
    CHECK(knn_distances(h, x, 0, n) == knn_distances(flat, x, 0, n));
    const auto s1 = neighbor_stats(h, x, 0, 7);
    const auto s2 = neighbor_stats(flat, x, 0, 7);
    CHECK(s1.mean == s2.mean);
    CHECK(s1.radius == s2.radius);
  }
}

TEST_CASE("equidistant neighbors are ordered by time") {
  ArmHistory h(2, 2);
  // Four points at distance 1 from the origin, inserted with increasing time.
  h.insert(Sample{Context{1.0, 0.0}, 0, 10.0, 1});
  h.insert(Sample{Context{0.0, 1.0}, 0, 20.0, 2});
  h.insert(Sample{Context{-1.0, 0.0}, 0, 30.0, 3});
  h.insert(Sample{Context{0.0, -1.0}, 0, 40.0, 4});
  NeighborQuery q(h, Context{0.0, 0.0}, 0);
  CHECK(q.nearest(1).time == 1);
  CHECK(q.nearest(2).time == 2);
  CHECK(q.nearest(4).time == 4);
  CHECK(neighbor_stats(h, Context{0.0, 0.0}, 0, 2).mean == doctest::Approx(15.0));
}

TEST_CASE("adaptive_k worked examples") {
  const std::vector<double> four{0.1, 0.2, 0.5, 1.0};
  const std::vector<double> two{0.5, 1.6};
  const std::vector<double> far{3.0};
  CHECK(adaptive_k(std::span<const double>(four), 1.0, 100) == std::optional<std::size_t>(4));
  CHECK(adaptive_k(std::span<const double>(two), 1.0, 100) == std::optional<std::size_t>(1));
  CHECK_FALSE(adaptive_k(std::span<const double>(far), 1.0, 100).has_value());

  ArmHistory empty(2, 2);
  CHECK_FALSE(adaptive_k(empty, Context{0.0, 0.0}, 0, 1.0, 100).has_value());
}

TEST_CASE("adaptive_k treats t_prev below 2 as no usable neighbor") {
  ArmHistory h(1, 2);
  h.insert(Sample{Context{0.0}, 0, 1.0, 1});
  CHECK_FALSE(adaptive_k(h, Context{0.0}, 0, 1.0, 0).has_value());
  CHECK_FALSE(adaptive_k(h, Context{0.0}, 0, 1.0, 1).has_value());
  CHECK(adaptive_k(h, Context{0.0}, 0, 1.0, 2) == std::optional<std::size_t>(1));
}

TEST_CASE("neighbor_stats worked examples") {
  ArmHistory one(2, 2);
  one.insert(Sample{Context{0.3, 0.4}, 0, 2.0, 1});
  const auto s = neighbor_stats(one, Context{0.3, 0.4}, 0, 1);
  CHECK(s.mean == 2.0);
  CHECK(s.radius == 0.0);

  ArmHistory h(2, 2);
  h.insert(Sample{Context{0.1, 0.0}, 0, 1.0, 1});
  h.insert(Sample{Context{0.0, 0.2}, 0, 2.0, 2});
  h.insert(Sample{Context{-0.3, 0.0}, 0, 3.0, 3});
  const auto s3 = neighbor_stats(h, Context{0.0, 0.0}, 0, 3);
  CHECK(s3.mean == doctest::Approx(2.0));
  CHECK(s3.radius == doctest::Approx(0.3));
  const auto s2 = neighbor_stats(h, Context{0.0, 0.0}, 0, 2);
  CHECK(s2.mean == doctest::Approx(1.5));
  CHECK(s2.radius == doctest::Approx(0.2));
}

TEST_CASE("adaptive_k maximality and prefix property on random instances") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(0, 60);
  std::uniform_real_distribution<double> scale(0.05, 3.0);
  std::uniform_int_distribution<long long> tprev(0, 5000);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto pts = random_points(rng, static_cast<std::size_t>(size(rng)), 2, -scale(rng), 1.0);
    const auto h = history_from(pts, 2);
    const std::vector<double> x{0.1, -0.2};
    const double L = scale(rng);
    const long long t = tprev(rng);
    const auto k = adaptive_k(h, Context(x), 0, L, t);

    std::vector<double> sorted;
    for (const auto& e : oracle::sorted_all(pts, x)) sorted.push_back(std::get<0>(e));
    REQUIRE(k == oracle::scan_k(sorted, L, t));
    if (!k) continue;
    const double lt = std::log(static_cast<double>(t));
    CHECK(L * sorted[*k - 1] <= std::sqrt(lt / static_cast<double>(*k)));
    if (*k < sorted.size()) {
      CHECK(L * sorted[*k] > std::sqrt(lt / static_cast<double>(*k + 1)));
    }
    for (std::size_t j = 1; j <= sorted.size(); ++j) {
      const bool ok = L * sorted[j - 1] <= std::sqrt(lt / static_cast<double>(j));
      CHECK(ok == (j <= *k));
    }
  }
}

TEST_CASE("lazy neighbor extension agrees with a full sort") {
  std::mt19937_64 rng(77);
  const auto pts = random_points(rng, 300, 4);
  const auto h = history_from(pts, 4);
  const std::vector<double> x{0.0, 0.5, -0.5, 0.25};
  const auto all = oracle::sorted_all(pts, x);
  NeighborQuery q(h, Context(x), 0);
  // Jump around so the sorted prefix grows in uneven steps.
  for (std::size_t j : {1u, 3u, 17u, 18u, 40u, 39u, 129u, 300u, 2u}) {
    CHECK(q.nearest(j).distance == std::get<0>(all[j - 1]));
    CHECK(q.nearest(j).time == std::get<1>(all[j - 1]));
  }
}
