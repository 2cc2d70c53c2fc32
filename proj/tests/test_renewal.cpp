#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ocbas/renewal.hpp"
#include "ocbas/rng.hpp"

using namespace ocbas;

namespace {

const DiscretePmf kUniform12 = DiscretePmf::uniform_range(1, 2);
const DiscretePmf kUniform911 = DiscretePmf::uniform_range(9, 11);

// Lemma-1 right-hand side evaluated literally: (F * f^{c-1})(T).
double at_least_via_cdf_convolution(const DiscretePmf& f, std::int64_t budget, std::int64_t c) {
  const DiscretePmf power = convolution_power(f, c - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < power.probs().size(); ++i) {
    const std::int64_t x = power.support_min() + static_cast<std::int64_t>(i);
    acc += power.probs()[i] * f.cdf(budget - x);
  }
  return acc;
}

}  // namespace

TEST_CASE("convolve of two point masses") {
  const DiscretePmf sum = convolve(DiscretePmf::point_mass(1), DiscretePmf::point_mass(1));
  CHECK(sum.support_min() == 2);
  REQUIRE(sum.probs().size() == 1);
  CHECK(sum.probs()[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("convolve uniform{1,2} with itself enumerates the four outcomes") {
  const DiscretePmf sq = convolve(kUniform12, kUniform12);
  CHECK(sq.support_min() == 2);
  REQUIRE(sq.probs().size() == 3);
  CHECK(sq.prob(2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sq.prob(3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sq.prob(4) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("point mass at zero is the convolution identity") {
  const DiscretePmf f = DiscretePmf(2, {0.3, 0.2, 0.5});
  const DiscretePmf same = convolve(f, DiscretePmf::point_mass(0));
  CHECK(same.support_min() == f.support_min());
  REQUIRE(same.probs().size() == f.probs().size());
  for (std::size_t i = 0; i < f.probs().size(); ++i)
    CHECK(same.probs()[i] == doctest::Approx(f.probs()[i]).epsilon(1e-12));
}

TEST_CASE("convolution powers") {
  const DiscretePmf zero = convolution_power(kUniform12, 0);
  CHECK(zero.support_min() == 0);
  CHECK(zero.prob(0) == doctest::Approx(1.0));

  const DiscretePmf one = convolution_power(kUniform12, 1);
  CHECK(one.support_min() == 1);
  CHECK(one.prob(1) == doctest::Approx(0.5));

  const DiscretePmf sq = convolution_power(kUniform12, 2);
  CHECK(sq.prob(3) == doctest::Approx(0.5).epsilon(1e-12));

  const DiscretePmf five = convolution_power(DiscretePmf::point_mass(10), 5);
  CHECK(five.support_min() == 50);
  CHECK(five.prob(50) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("prob_replications_at_least small cases") {
  CHECK(prob_replications_at_least(kUniform911, 0, 0) == doctest::Approx(1.0));
  const DiscretePmf ten = DiscretePmf::point_mass(10);
  CHECK(prob_replications_at_least(ten, 100, 10) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prob_replications_at_least(ten, 100, 11) == doctest::Approx(0.0));
  CHECK(prob_replications_at_least(kUniform12, 2, 2) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("prob_replications_at_least matches the literal convolution form") {
  for (std::int64_t budget : {3, 10, 25}) {
    for (std::int64_t c = 1; c <= 12; ++c) {
      CHECK(prob_replications_at_least(kUniform12, budget, c) ==
            doctest::Approx(at_least_via_cdf_convolution(kUniform12, budget, c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("prob_replications_exact small cases") {
  CHECK(prob_replications_exact(kUniform12, 2, 1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(prob_replications_exact(kUniform12, 2, 0) == doctest::Approx(0.0));
  CHECK(prob_replications_exact(DiscretePmf::point_mass(10), 5, 0) == doctest::Approx(1.0));
}

TEST_CASE("replication count pmf is a distribution and matches the tail differences") {
  for (std::int64_t budget : {0, 1, 2, 7, 40}) {
    const DiscretePmf counts = replication_count_pmf(kUniform12, budget);
    CHECK(counts.support_min() == 0);
    double total = 0.0;
    for (std::size_t c = 0; c < counts.probs().size(); ++c) {
      CHECK(counts.probs()[c] >= 0.0);
      total += counts.probs()[c];
      const double diff = prob_replications_at_least(kUniform12, budget, static_cast<std::int64_t>(c)) -
                          prob_replications_at_least(kUniform12, budget, static_cast<std::int64_t>(c) + 1);
      CHECK(counts.probs()[c] == doctest::Approx(diff).epsilon(1e-9));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("prob_replications_at_least is monotone in c and in T") {
  for (std::int64_t budget = 0; budget <= 30; budget += 3) {
    double prev = 2.0;
    for (std::int64_t c = 0; c <= 20; ++c) {
      const double p = prob_replications_at_least(kUniform911, budget, c);
      CHECK(p <= prev + 1e-12);
      prev = p;
    }
  }
  for (std::int64_t c : {1, 3, 5}) {
    double prev = -1.0;
    for (std::int64_t budget = 0; budget <= 80; budget += 4) {
      const double p = prob_replications_at_least(kUniform911, budget, c);
      CHECK(p >= prev - 1e-12);
      prev = p;
    }
  }
}

TEST_CASE("expected_replications") {
  CHECK(expected_replications(DiscretePmf::point_mass(10), 100) ==
        doctest::Approx(10.0).epsilon(1e-12));
  CHECK(expected_replications(kUniform12, 2) == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("expected_replications approaches the renewal limit" * doctest::timeout(120)) {
  const double expected = expected_replications(kUniform911, 100000);
  CHECK(expected >= 9990.0);
  CHECK(expected <= 10010.0);
}

TEST_CASE("posterior collapses to a single normal under deterministic durations") {
  PosteriorSpec spec;
  spec.mean = 0.0;
  spec.sigma = 6.0;
  spec.time_pmf = DiscretePmf::point_mass(10);
  spec.budget = 40;  // exactly 4 replications
  const PosteriorCdf cdf(spec);
  CHECK(cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  for (double x : {-4.0, -1.0, -0.3, 0.6, 2.5, 7.0})
    CHECK(cdf(x) == doctest::Approx(normal_cdf(x / 3.0)).epsilon(1e-12));
}

TEST_CASE("posterior requires a prior when zero replications are possible") {
  PosteriorSpec spec;
  spec.mean = 0.0;
  spec.sigma = 6.0;
  spec.time_pmf = kUniform911;
  spec.budget = 5;  // no replication can complete
  CHECK_THROWS_WITH_AS(posterior_cdf(spec, 0.0), doctest::Contains("prior required"),
                       std::invalid_argument);

  spec.prior_cdf = [](double x) { return normal_cdf(x); };
  CHECK(posterior_cdf(spec, 0.7) == doctest::Approx(normal_cdf(0.7)).epsilon(1e-12));
}

TEST_CASE("posterior mixes the prior by the exact zero-replication mass") {
  PosteriorSpec spec;
  spec.mean = 1.0;
  spec.sigma = 2.0;
  spec.time_pmf = kUniform911;
  spec.budget = 10;  // P{n=0} = 1/3, P{n=1} = 2/3
  spec.prior_cdf = [](double x) { return normal_cdf(x); };
  const PosteriorCdf cdf(spec);
  for (double x : {-2.0, 0.0, 1.0, 3.0}) {
    const double expected = normal_cdf((x - 1.0) / 2.0) * (2.0 / 3.0) + normal_cdf(x) / 3.0;
    CHECK(cdf(x) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("posterior is monotone with correct tail limits") {
  PosteriorSpec spec;
  spec.mean = 2.0;
  spec.sigma = 6.0;
  spec.time_pmf = kUniform911;
  spec.budget = 300;
  const PosteriorCdf cdf(spec);
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = spec.mean - 10.0 * spec.sigma + static_cast<double>(i) * (20.0 * spec.sigma / 1000.0);
    const double g = cdf(x);
    CHECK(g >= prev - 1e-12);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
    prev = g;
  }
  CHECK(cdf(spec.mean - 10.0 * spec.sigma) < 1e-6);
  CHECK(cdf(spec.mean + 10.0 * spec.sigma) > 1.0 - 1e-6);
}

TEST_CASE("posterior matches a Monte Carlo sample-mean distribution (DKW)") {
  // replications run until the next one would not fit in the budget;
  // the crossing replication is discarded unfinished
  const std::int64_t budget = 200;
  const double sigma = 6.0;
  PosteriorSpec spec;
  spec.mean = 0.0;
  spec.sigma = sigma;
  spec.time_pmf = kUniform911;
  spec.budget = budget;
  const PosteriorCdf cdf(spec);

  const int trials = 20000;
  RandomStream stream(20240811);
  std::vector<double> sample_means;
  sample_means.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    std::int64_t consumed = 0;
    std::int64_t n = 0;
    double sum = 0.0;
    while (true) {
      const std::int64_t elapsed = stream.uniform_int(9, 11);
      if (consumed + elapsed > budget) break;
      consumed += elapsed;
      ++n;
      sum += stream.normal(0.0, sigma);
    }
    REQUIRE(n >= 1);
    sample_means.push_back(sum / static_cast<double>(n));
  }
  std::sort(sample_means.begin(), sample_means.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < sample_means.size(); ++i) {
    const double g = cdf(sample_means[i]);
    const double lo = static_cast<double>(i) / trials;
    const double hi = static_cast<double>(i + 1) / trials;
    ks = std::max({ks, g - lo, hi - g});
  }
  const double dkw = std::sqrt(std::log(2.0 / 0.01) / (2.0 * trials));
  CHECK(ks < dkw);
}

TEST_CASE("gaussian approximation values") {
  CHECK(gaussian_approx_cdf(0.0, 6.0, 10.0, 1000.0, 0.0) == doctest::Approx(0.5));
  // sqrt(36 * 10 / 1000) = 0.6, so x = 0.6 sits one scale unit out
  CHECK(gaussian_approx_cdf(0.0, 6.0, 10.0, 1000.0, 0.6) ==
        doctest::Approx(0.8413447460685429).epsilon(1e-12));
}
