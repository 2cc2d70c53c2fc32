#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <numeric>
#include <vector>

#include "ocbas/core.hpp"
#include "ocbas/rng.hpp"

using namespace ocbas;

namespace {

DesignStats feed(const std::vector<double>& values, std::int64_t elapsed_each = 1) {
  DesignStats stats;
  for (double v : values) stats = update_stats(stats, Observation{1, v, elapsed_each});
  return stats;
}

}  // namespace

TEST_CASE("update_stats single observation") {
  const DesignStats stats = update_stats(DesignStats{}, Observation{1, 5.0, 10});
  CHECK(stats.completed == 1);
  CHECK(stats.mean == doctest::Approx(5.0));
  CHECK(stats.consumed_time == 10);
  CHECK(!stats.sample_variance().has_value());
  CHECK(stats.mean_time() == doctest::Approx(10.0));
}

TEST_CASE("update_stats two observations match hand computation") {
  DesignStats stats = update_stats(DesignStats{}, Observation{1, 5.0, 10});
  stats = update_stats(stats, Observation{1, 7.0, 12});
  CHECK(stats.completed == 2);
  CHECK(stats.mean == doctest::Approx(6.0).epsilon(1e-12));
  REQUIRE(stats.sample_variance().has_value());
  CHECK(*stats.sample_variance() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(stats.consumed_time == 22);
  CHECK(stats.mean_time() == doctest::Approx(11.0));
}

TEST_CASE("update_stats constant sample degenerates to zero variance") {
  std::vector<double> values(1000, 3.25);
  const DesignStats stats = feed(values);
  CHECK(stats.mean == doctest::Approx(3.25).epsilon(1e-12));
  CHECK(*stats.sample_variance() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("update_stats rejects non-positive durations") {
  CHECK_THROWS_AS(update_stats(DesignStats{}, Observation{1, 1.0, 0}), std::invalid_argument);
}

TEST_CASE("update_stats is order-insensitive for mean and variance") {
  RandomStream stream(2024);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> values(50);
    for (double& v : values) v = stream.normal(3.0, 7.0);
    const DesignStats forward = feed(values);
    std::vector<double> shuffled = values;
    for (std::size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[static_cast<std::size_t>(
                                     stream.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    const DesignStats permuted = feed(shuffled);
    CHECK(forward.mean == doctest::Approx(permuted.mean).epsilon(1e-9));
    CHECK(*forward.sample_variance() ==
          doctest::Approx(*permuted.sample_variance()).epsilon(1e-9));
  }
}

TEST_CASE("consumed time is the exact integer sum of durations") {
  RandomStream stream(7);
  DesignStats stats;
  std::int64_t expected = 0;
  for (int i = 0; i < 5000; ++i) {
    const std::int64_t elapsed = stream.uniform_int(1, 1000);
    expected += elapsed;
    stats = update_stats(stats, Observation{1, stream.uniform01(), elapsed});
  }
  CHECK(stats.consumed_time == expected);
}

TEST_CASE("select_observed_best picks the minimal mean") {
  std::vector<DesignStats> stats(3);
  stats[0] = feed({3.2});
  stats[1] = feed({1.1});
  stats[2] = feed({2.0});
  CHECK(select_observed_best(stats) == 2);
}

TEST_CASE("select_observed_best breaks ties toward the smallest id") {
  std::vector<DesignStats> stats(2);
  stats[0] = feed({1.0});
  stats[1] = feed({1.0});
  CHECK(select_observed_best(stats) == 1);
}

TEST_CASE("select_observed_best requires at least one replication everywhere") {
  std::vector<DesignStats> stats(2);
  stats[0] = feed({1.0});
  CHECK_THROWS_WITH_AS(select_observed_best(stats),
                       doctest::Contains("insufficient observations"), std::runtime_error);
}

TEST_CASE("select_observed_best is invariant under a common mean shift") {
  RandomStream stream(99);
  std::vector<DesignStats> stats(6);
  for (auto& s : stats) {
    std::vector<double> values(5);
    for (double& v : values) v = stream.normal(0.0, 2.0);
    s = feed(values);
  }
  const DesignId before = select_observed_best(stats);
  for (auto& s : stats) s.mean += 123.456;
  CHECK(select_observed_best(stats) == before);
}
