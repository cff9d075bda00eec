#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "bankucb/bank_ucb.hpp"

using namespace bankucb;

namespace {

BankUcbConfig config(double sigma, std::uint64_t seed = 1) {
  return BankUcbConfig{1.0, sigma, 2, 2, seed};
}

/// Plays batch 1 to its end, records `samples` and commits.
void fill_first_batch(BankUcbPolicy& p, const std::vector<Sample>& samples) {
  const Round end = p.grid().batch_end(1);
  for (Round t = 1; t <= end; ++t) p.select_action(Context{0.0, 0.0});
  for (const auto& s : samples) p.record(s);
  p.commit_batch();
}

double norm(const Context& x) { return std::hypot(x[0], x[1]); }

}  // namespace

TEST_CASE("noise bound values") {
  CHECK(noise_bound(3, config(0.0), 100) == 0.0);
  CHECK(noise_bound(4, config(1.0), 100) == doctest::Approx(4.100151562017954).epsilon(1e-12));
  CHECK(noise_bound(8, config(1.0), 100) ==
        doctest::Approx(noise_bound(4, config(1.0), 100) / std::sqrt(2.0)).epsilon(1e-12));
  // d = 14, t ~ 1e4 would overflow the literal t^(2d+3) form.
  BankUcbConfig wide{1.0, 1.0, 2, 14, 0};
  CHECK(std::isfinite(noise_bound(1, wide, 15000)));
}

TEST_CASE("UCB is infinite without data and in the first batch") {
  BankUcbPolicy p(config(0.5), BatchGrid{{0, 5, 10}});
  CHECK(p.ucb(Context{0.0, 0.0}, 0).is_infinite());
  CHECK(p.frozen_horizon() == 0);
  fill_first_batch(p, {Sample{Context{0.0, 0.0}, 0, 1.0, 1}});
  CHECK(p.ucb(Context{0.0, 0.0}, 1).is_infinite());
  CHECK_FALSE(p.ucb(Context{0.0, 0.0}, 0).is_infinite());
}

TEST_CASE("UCB worked examples") {
  SUBCASE("zero noise, exact neighbor") {
    BankUcbPolicy p(config(0.0), BatchGrid{{0, 10, 20}});
    fill_first_batch(p, {Sample{Context{0.2, 0.3}, 0, 0.75, 4}});
    CHECK(p.ucb(Context{0.2, 0.3}, 0).value() == 0.75);
  }
  SUBCASE("three neighbors at t_prev = 100") {
    BankUcbPolicy p(config(1.0), BatchGrid{{0, 100, 200}});
    fill_first_batch(p, {Sample{Context{0.1, 0.0}, 0, 1.0, 1},
                         Sample{Context{0.0, 0.2}, 0, 2.0, 2},
                         Sample{Context{-0.3, 0.0}, 0, 3.0, 3}});
    CHECK(p.ucb(Context{0.0, 0.0}, 0).value() == doctest::Approx(7.03444721609866).epsilon(1e-12));
  }
}

TEST_CASE("select_action takes the strict argmax") {
  BankUcbPolicy p(config(0.0), BatchGrid{{0, 10, 20}});
  fill_first_batch(p, {Sample{Context{0.5, 0.5}, 0, 3.2, 1}, Sample{Context{0.5, 0.5}, 1, 7.0, 2}});
  CHECK(p.ucb(Context{0.5, 0.5}, 0).value() == 3.2);
  CHECK(p.ucb(Context{0.5, 0.5}, 1).value() == 7.0);
  CHECK(p.select_action(Context{0.5, 0.5}) == 1);
}

TEST_CASE("full ties are broken by the seeded stream") {
  const BatchGrid g{{0, 400}};
  BankUcbPolicy a(config(0.5, 99), g);
  BankUcbPolicy b(config(0.5, 99), g);
  BankUcbPolicy c(config(0.5, 100), g);
  std::vector<ArmId> seq_a, seq_b, seq_c;
  for (int t = 0; t < 400; ++t) {
    seq_a.push_back(a.select_action(Context{0.0, 0.0}));
    seq_b.push_back(b.select_action(Context{0.0, 0.0}));
    seq_c.push_back(c.select_action(Context{0.0, 0.0}));
  }
  CHECK(seq_a == seq_b);
  CHECK(seq_a != seq_c);
  const auto ones = std::count(seq_a.begin(), seq_a.end(), 1);
  CHECK(ones > 150);
  CHECK(ones < 250);
}

TEST_CASE("recorded feedback stays invisible until commit") {
  BankUcbPolicy p(config(0.5), BatchGrid{{0, 10, 20, 30}});
  fill_first_batch(p, {Sample{Context{0.0, 0.0}, 0, 1.0, 3}, Sample{Context{0.1, 0.0}, 1, 0.0, 7}});
  const Context x{0.05, 0.05};
  const auto before = p.ucbs(x);
  for (Round t = 11; t <= 20; ++t) p.select_action(x);
  p.record(Sample{Context{0.05, 0.05}, 0, 100.0, 12});
  p.record(Sample{Context{0.05, 0.05}, 1, -100.0, 11});
  CHECK(p.ucbs(x) == before);
  CHECK(p.pending().size() == 2);

  CHECK_THROWS_AS(p.record(Sample{Context{0.0, 0.0}, 0, 1.0, 10}), BatchViolation);
  CHECK_THROWS_AS(p.record(Sample{Context{0.0, 0.0}, 0, 1.0, 21}), BatchViolation);

  p.commit_batch();
  CHECK(p.ucbs(x) != before);
  CHECK(p.frozen().size() == 4);
}

TEST_CASE("commit bookkeeping") {
  BankUcbPolicy p(config(0.5), BatchGrid{{0, 4, 9, 15}});
  p.select_action(Context{0.0, 0.0});
  CHECK_THROWS_AS(p.commit_batch(), BatchViolation);
  for (int i = 0; i < 3; ++i) p.select_action(Context{0.0, 0.0});
  CHECK_THROWS_AS(p.select_action(Context{0.0, 0.0}), BatchViolation);
  p.commit_batch();
  CHECK(p.batch_index() == 2);
  CHECK(p.frozen_horizon() == 4);
  CHECK(p.frozen().size() == 0);
}

TEST_CASE("frozen sizes track the grid across a full run") {
  const BatchGrid g{{0, 7, 30, 64, 100}};
  BankUcbPolicy p(config(0.5), g);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int m = 1; m <= g.num_batches(); ++m) {
    CHECK(p.frozen().size() == static_cast<std::size_t>(g.batch_start(m)));
    for (Round t = g.batch_start(m) + 1; t <= g.batch_end(m); ++t) {
      const Context x{u(rng), u(rng)};
      const ArmId a = p.select_action(x);
      p.record(Sample{x, a, u(rng), t});
    }
    p.commit_batch();
  }
  CHECK(p.finished());
  CHECK(p.frozen().size() == 100);
}

TEST_CASE("post-commit UCB matches a from-scratch computation") {
  const BatchGrid g{{0, 60, 120}};
  BankUcbPolicy p(config(0.7), g);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<oracle::Point> per_arm[2];
  std::vector<Sample> samples;
  for (Round t = 1; t <= 60; ++t) {
    const Context x{u(rng), u(rng)};
    const ArmId a = p.select_action(x);
    samples.push_back(Sample{x, a, u(rng), t});
    per_arm[a].push_back({x.vector(), samples.back().reward, t});
  }
  // Out-of-order recording must not matter.
  std::reverse(samples.begin(), samples.end());
  for (const auto& s : samples) p.record(s);
  p.commit_batch();

  const BankUcbConfig cfg = p.config();
  for (int q = 0; q < 50; ++q) {
    const std::vector<double> x{u(rng), u(rng)};
    for (ArmId a = 0; a < 2; ++a) {
      const auto sorted = oracle::sorted_all(per_arm[a], x);
      std::vector<double> dists;
      for (const auto& e : sorted) dists.push_back(std::get<0>(e));
      const auto k = oracle::scan_k(dists, cfg.lipschitz, 60);
      const auto got = p.ucb(Context(x), a);
      if (!k) {
        CHECK(got.is_infinite());
        continue;
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < *k; ++j) sum += std::get<2>(sorted[j]);
      const double log_arg = std::log(2.0) + 7.0 * std::log(60.0) + std::log(2.0);
      const double expected = sum / static_cast<double>(*k) +
                              std::sqrt(2.0 * 0.49 / static_cast<double>(*k) * log_arg) +
                              dists[*k - 1];
      CHECK(got.value() == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("UCB properties on random noiseless data") {
  // Arm 0 mean ||x||, arm 1 mean 0.5 - ||x||: both 1-Lipschitz.
  auto mean = [](ArmId a, const Context& x) { return a == 0 ? norm(x) : 0.5 - norm(x); };
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const BatchGrid g{{0, 300, 600}};
    BankUcbPolicy clean(config(0.0, 5), g);
    BankUcbPolicy noisy(config(0.4, 5), g);
    BankUcbPolicy noisier(config(0.9, 5), g);
    BankUcbPolicy shifted(config(0.4, 5), g);
    const double c = 2.5;
    for (Round t = 1; t <= 300; ++t) {
      const Context x{u(rng), u(rng)};
      const ArmId a = clean.select_action(x);
      noisy.select_action(x);
      noisier.select_action(x);
      shifted.select_action(x);
      clean.record(Sample{x, a, mean(a, x), t});
      noisy.record(Sample{x, a, mean(a, x), t});
      noisier.record(Sample{x, a, mean(a, x), t});
      shifted.record(Sample{x, a, mean(a, x) + c, t});
    }
    for (auto* p : {&clean, &noisy, &noisier, &shifted}) p->commit_batch();

    for (int q = 0; q < 50; ++q) {
      const Context x{u(rng), u(rng)};
      for (ArmId a = 0; a < 2; ++a) {
        const auto v0 = clean.ucb(x, a);
        const auto v1 = noisy.ucb(x, a);
        const auto v2 = noisier.ucb(x, a);
        const auto vs = shifted.ucb(x, a);
        if (!v0.is_infinite()) CHECK(v0.value() >= mean(a, x) - 1e-9);
        CHECK(v0.is_infinite() == v1.is_infinite());
        if (!v1.is_infinite()) {
          CHECK(v1.value() >= v0.value());
          CHECK(v2.value() >= v1.value());
          CHECK(vs.value() == doctest::Approx(v1.value() + c).epsilon(1e-12));
        }
      }
      CHECK(noisy.select_action(x) == shifted.select_action(x));
    }
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS(BankUcbPolicy(BankUcbConfig{0.0, 0.5, 2, 2, 0}, BatchGrid{{0, 4}}));
  CHECK_THROWS(BankUcbPolicy(BankUcbConfig{1.0, -0.5, 2, 2, 0}, BatchGrid{{0, 4}}));
  CHECK_THROWS(BankUcbPolicy(BankUcbConfig{1.0, 0.5, 1, 2, 0}, BatchGrid{{0, 4}}));
  CHECK_THROWS(BankUcbPolicy(BankUcbConfig{1.0, 0.5, 2, 2, 0}, BatchGrid{{0, 4, 4}}));
}
