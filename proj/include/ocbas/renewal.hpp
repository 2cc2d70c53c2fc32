#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ocbas {

/// CDF of the standard normal distribution.
double normal_cdf(double x);

/// Probability mass function over a contiguous range of integers
/// [support_min, support_min + probs.size() - 1], stored densely.
/// Simulation-time PMFs have support_min >= 1; support_min == 0 appears only
/// for the identity element of convolution (point mass at 0).
class DiscretePmf {
 public:
  /// Validates: probabilities nonnegative, mass within 1e-12 of one.
  DiscretePmf(std::int64_t support_min, std::vector<double> probs);

  static DiscretePmf point_mass(std::int64_t value);
  /// Uniform over the integers lo..hi inclusive.
  static DiscretePmf uniform_range(std::int64_t lo, std::int64_t hi);

  std::int64_t support_min() const { return support_min_; }
  std::int64_t support_max() const {
    return support_min_ + static_cast<std::int64_t>(probs_.size()) - 1;
  }
  const std::vector<double>& probs() const { return probs_; }

  /// P{X = v}; zero outside the stored range.
  double prob(std::int64_t v) const;
  /// CDF: P{X <= v}.
  double cdf(std::int64_t v) const;
  double mean() const;

 private:
  std::int64_t support_min_;
  std::vector<double> probs_;
};

/// PMF of the sum of two independent variables. Mass is renormalized when
/// floating-point drift exceeds 1e-12.
DiscretePmf convolve(const DiscretePmf& a, const DiscretePmf& b);

/// c-fold self-convolution f^c; f^0 is the point mass at 0.
DiscretePmf convolution_power(const DiscretePmf& f, std::int64_t c);

/// Exact distribution of the number of replications n completed within
/// budget T when each replication consumes an i.i.d. duration ~ f
/// (support over c = 0 .. floor(T / f.support_min()); the series is exact,
/// no tail is truncated). Requires f.support_min() >= 1.
DiscretePmf replication_count_pmf(const DiscretePmf& f, std::int64_t budget);

/// P{n >= c} = (F * f^{c-1})(T); equals 1 for c = 0.
double prob_replications_at_least(const DiscretePmf& f, std::int64_t budget, std::int64_t c);

/// P{n = c} = [F * (f^{c-1} - f^c)](T); equals 1 - F(T) for c = 0.
double prob_replications_exact(const DiscretePmf& f, std::int64_t budget, std::int64_t c);

/// E[n] within budget T. Obeys the elementary-renewal limit E[n]/T -> 1/mu.
double expected_replications(const DiscretePmf& f, std::int64_t budget);

/// Inputs for the exact posterior CDF of a design's performance: the sample
/// mean and noise level, the replication-duration PMF, the allocated budget
/// and (when the budget may complete zero replications) a prior CDF.
struct PosteriorSpec {
  double mean = 0.0;
  double sigma = 1.0;  // > 0
  DiscretePmf time_pmf = DiscretePmf::point_mass(1);
  std::int64_t budget = 0;
  std::optional<std::function<double(double)>> prior_cdf;
};

/// Evaluates the posterior CDF
///   G(x) = sum_c Phi((x - mean) / (sigma / sqrt(c))) P{n = c} + G0(x) P{n = 0}
/// many times against one precomputed replication-count distribution.
class PosteriorCdf {
 public:
  explicit PosteriorCdf(PosteriorSpec spec);
  double operator()(double x) const;

 private:
  PosteriorSpec spec_;
  DiscretePmf count_pmf_;
};

/// One-shot form of PosteriorCdf. Throws "prior required" when P{n=0}
/// exceeds 1e-12 and no prior CDF was supplied.
double posterior_cdf(const PosteriorSpec& spec, double x);

/// Lemma-3 limit: N(mean, sigma^2 * mu_time / T) approximation of the
/// posterior CDF.
double gaussian_approx_cdf(double mean, double sigma, double mu_time, double budget, double x);

}  // namespace ocbas
