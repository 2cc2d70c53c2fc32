#include "ocbas/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ocbas {

namespace {

constexpr double kMassTolerance = 1e-12;

double total_mass(const std::vector<double>& probs) {
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

void renormalize_if_drifted(std::vector<double>& probs) {
  const double mass = total_mass(probs);
  if (std::abs(mass - 1.0) > kMassTolerance) {
    for (double& p : probs) p /= mass;
  }
}

void require_time_pmf(const DiscretePmf& f, const char* where) {
  if (f.support_min() < 1)
    throw std::invalid_argument(std::string(where) + ": time PMF needs support_min >= 1");
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

DiscretePmf::DiscretePmf(std::int64_t support_min, std::vector<double> probs)
    : support_min_(support_min), probs_(std::move(probs)) {
  if (support_min_ < 0) throw std::invalid_argument("DiscretePmf: negative support");
  if (probs_.empty()) throw std::invalid_argument("DiscretePmf: empty support");
  for (double p : probs_)
    if (!(p >= 0.0)) throw std::invalid_argument("DiscretePmf: negative probability");
  if (std::abs(total_mass(probs_) - 1.0) > kMassTolerance)
    throw std::invalid_argument("DiscretePmf: mass does not sum to 1");
}

DiscretePmf DiscretePmf::point_mass(std::int64_t value) {
  return DiscretePmf(value, {1.0});
}

DiscretePmf DiscretePmf::uniform_range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_range: lo > hi");
  std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1),
                            1.0 / static_cast<double>(hi - lo + 1));
  return DiscretePmf(lo, std::move(probs));
}

double DiscretePmf::prob(std::int64_t v) const {
  if (v < support_min_ || v > support_max()) return 0.0;
  return probs_[static_cast<std::size_t>(v - support_min_)];
}

double DiscretePmf::cdf(std::int64_t v) const {
  if (v < support_min_) return 0.0;
  if (v >= support_max()) return 1.0;
  double acc = 0.0;
  for (std::int64_t i = 0; i <= v - support_min_; ++i) acc += probs_[static_cast<std::size_t>(i)];
  return std::min(acc, 1.0);
}

double DiscretePmf::mean() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i)
    acc += probs_[i] * static_cast<double>(support_min_ + static_cast<std::int64_t>(i));
  return acc;
}

DiscretePmf convolve(const DiscretePmf& a, const DiscretePmf& b) {
  std::vector<double> out(a.probs().size() + b.probs().size() - 1, 0.0);
  for (std::size_t i = 0; i < a.probs().size(); ++i) {
    const double pa = a.probs()[i];
    if (pa == 0.0) continue;
    for (std::size_t j = 0; j < b.probs().size(); ++j) out[i + j] += pa * b.probs()[j];
  }
  renormalize_if_drifted(out);
  return DiscretePmf(a.support_min() + b.support_min(), std::move(out));
}

DiscretePmf convolution_power(const DiscretePmf& f, std::int64_t c) {
  if (c < 0) throw std::invalid_argument("convolution_power: negative power");
  DiscretePmf acc = DiscretePmf::point_mass(0);
  for (std::int64_t i = 0; i < c; ++i) acc = convolve(acc, f);
  return acc;
}

DiscretePmf replication_count_pmf(const DiscretePmf& f, std::int64_t budget) {
  require_time_pmf(f, "replication_count_pmf");
  if (budget < 0) throw std::invalid_argument("replication_count_pmf: negative budget");

  // P{n >= c} is the CDF of f^c at the budget; build the powers incrementally
  // and difference consecutive tails. Stops once P{n >= c} hits zero, which
  // happens no later than c = floor(budget / support_min) + 1.
  std::vector<double> at_least = {1.0};  // P{n >= 0}
  DiscretePmf power = DiscretePmf::point_mass(0);
  while (at_least.back() > 0.0) {
    power = convolve(power, f);
    if (power.support_min() > budget) {
      at_least.push_back(0.0);
      break;
    }
    at_least.push_back(power.cdf(budget));
  }
  std::vector<double> exact(at_least.size() - 1, 0.0);
  for (std::size_t c = 0; c + 1 < at_least.size(); ++c)
    exact[c] = std::max(0.0, at_least[c] - at_least[c + 1]);
  renormalize_if_drifted(exact);
  return DiscretePmf(0, std::move(exact));
}

double prob_replications_at_least(const DiscretePmf& f, std::int64_t budget, std::int64_t c) {
  require_time_pmf(f, "prob_replications_at_least");
  if (budget < 0 || c < 0) throw std::invalid_argument("prob_replications_at_least: negative input");
  if (c == 0) return 1.0;
  if (c * f.support_min() > budget) return 0.0;
  return convolution_power(f, c).cdf(budget);
}

double prob_replications_exact(const DiscretePmf& f, std::int64_t budget, std::int64_t c) {
  require_time_pmf(f, "prob_replications_exact");
  if (budget < 0 || c < 0) throw std::invalid_argument("prob_replications_exact: negative input");
  const DiscretePmf counts = replication_count_pmf(f, budget);
  return counts.prob(c);
}

double expected_replications(const DiscretePmf& f, std::int64_t budget) {
  return replication_count_pmf(f, budget).mean();
}

PosteriorCdf::PosteriorCdf(PosteriorSpec spec)
    : spec_(std::move(spec)), count_pmf_(replication_count_pmf(spec_.time_pmf, spec_.budget)) {
  if (!(spec_.sigma > 0.0)) throw std::invalid_argument("posterior_cdf: sigma must be positive");
  if (count_pmf_.prob(0) > kMassTolerance && !spec_.prior_cdf)
    throw std::invalid_argument("posterior_cdf: prior required");
}

double PosteriorCdf::operator()(double x) const {
  double acc = 0.0;
  const auto& probs = count_pmf_.probs();
  for (std::size_t c = 1; c < probs.size(); ++c) {
    if (probs[c] == 0.0) continue;
    const double scale = spec_.sigma / std::sqrt(static_cast<double>(c));
    acc += normal_cdf((x - spec_.mean) / scale) * probs[c];
  }
  const double p_zero = count_pmf_.prob(0);
  if (p_zero > 0.0 && spec_.prior_cdf) acc += (*spec_.prior_cdf)(x) * p_zero;
  return std::clamp(acc, 0.0, 1.0);
}

double posterior_cdf(const PosteriorSpec& spec, double x) { return PosteriorCdf(spec)(x); }

double gaussian_approx_cdf(double mean, double sigma, double mu_time, double budget, double x) {
  if (!(budget > 0.0)) throw std::invalid_argument("gaussian_approx_cdf: budget must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_approx_cdf: sigma must be positive");
  if (!(mu_time >= 1.0)) throw std::invalid_argument("gaussian_approx_cdf: mu_time must be >= 1");
  return normal_cdf((x - mean) / std::sqrt(sigma * sigma * mu_time / budget));
}

}  // namespace ocbas
