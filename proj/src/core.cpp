#include "ocbas/core.hpp"

#include <numeric>
#include <stdexcept>

namespace ocbas {

ProblemSpec::ProblemSpec(int k, std::optional<DesignId> best)
    : design_count(k), true_best(best) {
  if (k < 2) throw std::invalid_argument("ProblemSpec: need at least 2 designs");
  if (best && (*best < 1 || *best > k))
    throw std::invalid_argument("ProblemSpec: true_best outside 1..k");
}

double DesignStats::mean_time() const {
  if (completed < 1) throw std::logic_error("mean_time: no completed replications");
  return static_cast<double>(consumed_time) / static_cast<double>(completed);
}

double AllocationVector::total() const {
  return std::accumulate(budgets.begin(), budgets.end(), 0.0);
}

DesignStats update_stats(const DesignStats& stats, const Observation& obs) {
  if (obs.elapsed < 1) throw std::invalid_argument("update_stats: elapsed must be >= 1");
  DesignStats next = stats;
  next.completed = stats.completed + 1;
  const double delta = obs.value - stats.mean;
  next.mean = stats.mean + delta / static_cast<double>(next.completed);
  next.m2 = stats.m2 + delta * (obs.value - next.mean);
  next.consumed_time = stats.consumed_time + obs.elapsed;
  return next;
}

DesignId select_observed_best(std::span<const DesignStats> all_stats) {
  if (all_stats.empty()) throw std::invalid_argument("select_observed_best: empty");
  DesignId best = 0;
  double best_mean = 0.0;
  for (std::size_t i = 0; i < all_stats.size(); ++i) {
    if (all_stats[i].completed == 0)
      throw std::runtime_error("select_observed_best: insufficient observations for design " +
                               std::to_string(i + 1));
    if (best == 0 || all_stats[i].mean < best_mean) {
      best = static_cast<DesignId>(i + 1);
      best_mean = all_stats[i].mean;
    }
  }
  return best;
}

}  // namespace ocbas
