#include "ocbas/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ocbas/renewal.hpp"

namespace ocbas {

AllocationInputs make_allocation_inputs(std::span<const DesignStats> stats, double stage_total) {
  AllocationInputs inputs;
  inputs.designs.reserve(stats.size());
  for (const DesignStats& s : stats) {
    const auto variance = s.sample_variance();
    if (!variance)
      throw std::runtime_error("make_allocation_inputs: insufficient observations");
    inputs.designs.push_back({s.mean, std::max(*variance, kVarianceFloor), s.mean_time()});
  }
  inputs.best = select_observed_best(stats);
  inputs.stage_total = stage_total;
  return inputs;
}

AllocationVector allocate_theorem2(const AllocationInputs& inputs) {
  const int k = static_cast<int>(inputs.designs.size());
  if (k < 2) throw std::invalid_argument("allocate_theorem2: need at least 2 designs");
  if (!(inputs.stage_total > 0.0))
    throw std::invalid_argument("allocate_theorem2: stage_total must be positive");
  if (inputs.best < 1 || inputs.best > k)
    throw std::invalid_argument("allocate_theorem2: best outside 1..k");
  const int b = inputs.best - 1;
  const DesignSummary& best = inputs.designs[b];
  const double gap_floor = 1e-6 * std::max(1.0, std::abs(best.mean));

  // Eq. (2.1): non-best budgets proportional to sigma^2 mu / delta^2.
  std::vector<double> t(k, 0.0);
  for (int i = 0; i < k; ++i) {
    if (i == b) continue;
    const DesignSummary& d = inputs.designs[i];
    const double gap = std::max(std::abs(best.mean - d.mean), gap_floor);
    t[i] = d.variance * d.mean_time / (gap * gap);
  }
  // Eq. (2.2); homogeneous of degree one, so the shared scale drops out.
  double sum_sq = 0.0;
  for (int i = 0; i < k; ++i) {
    if (i == b) continue;
    const DesignSummary& d = inputs.designs[i];
    sum_sq += t[i] * t[i] / (d.variance * d.mean_time);
  }
  t[b] = std::sqrt(best.variance * best.mean_time * sum_sq);

  const double scale = inputs.stage_total / std::accumulate(t.begin(), t.end(), 0.0);
  for (double& v : t) v *= scale;
  return AllocationVector{std::move(t)};
}

AllocationVector allocate_equal(int design_count, double stage_total) {
  if (design_count < 1) throw std::invalid_argument("allocate_equal: need at least 1 design");
  return AllocationVector{
      std::vector<double>(design_count, stage_total / static_cast<double>(design_count))};
}

std::vector<std::int64_t> allocate_ocba_classic(const AllocationInputs& inputs,
                                                std::int64_t total_reps) {
  const int k = static_cast<int>(inputs.designs.size());
  if (total_reps < k)
    throw std::invalid_argument("allocate_ocba_classic: total_reps below design count");

  AllocationInputs unit_time = inputs;
  for (DesignSummary& d : unit_time.designs) d.mean_time = 1.0;
  unit_time.stage_total = static_cast<double>(total_reps);
  const AllocationVector continuous = allocate_theorem2(unit_time);

  // Largest-remainder rounding; preserves the total exactly.
  std::vector<std::int64_t> counts(k);
  std::vector<std::pair<double, int>> remainders(k);
  std::int64_t assigned = 0;
  for (int i = 0; i < k; ++i) {
    counts[i] = static_cast<std::int64_t>(std::floor(continuous.budgets[i]));
    remainders[i] = {continuous.budgets[i] - static_cast<double>(counts[i]), i};
    assigned += counts[i];
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const std::int64_t leftover = total_reps - assigned;
  for (std::int64_t j = 0; j < leftover; ++j)
    ++counts[remainders[static_cast<std::size_t>(j)].second];
  return counts;
}

double apcs(const AllocationInputs& inputs, const AllocationVector& budgets) {
  const int k = static_cast<int>(inputs.designs.size());
  if (static_cast<int>(budgets.budgets.size()) != k)
    throw std::invalid_argument("apcs: budget/design size mismatch");
  if (inputs.best < 1 || inputs.best > k)
    throw std::invalid_argument("apcs: best outside 1..k");
  for (double t : budgets.budgets)
    if (!(t > 0.0)) throw std::invalid_argument("apcs: budgets must be positive");

  const int b = inputs.best - 1;
  const DesignSummary& best = inputs.designs[b];
  const double best_load = best.variance * best.mean_time / budgets.budgets[b];
  double miss = 0.0;
  for (int i = 0; i < k; ++i) {
    if (i == b) continue;
    const DesignSummary& d = inputs.designs[i];
    const double pair_var = best_load + d.variance * d.mean_time / budgets.budgets[i];
    miss += normal_cdf((best.mean - d.mean) / std::sqrt(pair_var));
  }
  return 1.0 - miss;
}

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::EqualAllocation: return "ea";
    case Policy::ClassicOcba: return "ocba";
    case Policy::Ocbas: return "ocbas";
  }
  return "?";
}

void PolicyConfig::validate(int design_count) const {
  if (design_count < 2) throw std::invalid_argument("PolicyConfig: need at least 2 designs");
  if (!(total_budget > 0.0)) throw std::invalid_argument("PolicyConfig: total_budget must be positive");
  if (policy == Policy::ClassicOcba) {
    if (warmup_reps <= 0 || increment_reps <= 0)
      throw std::invalid_argument("PolicyConfig: warm-up and increment must be positive");
    if (total_budget < static_cast<double>(design_count * warmup_reps))
      throw std::invalid_argument("PolicyConfig: total_budget below warm-up equivalent");
  } else {
    if (!(warmup_time > 0.0) || !(increment_time > 0.0))
      throw std::invalid_argument("PolicyConfig: warm-up and increment must be positive");
    if (total_budget < static_cast<double>(design_count) * warmup_time)
      throw std::invalid_argument("PolicyConfig: total_budget below warm-up equivalent");
  }
}

SelectionReport run_sequential(const Simulator& sim, const PolicyConfig& cfg,
                               RandomStream& stream) {
  const int k = sim.design_count();
  cfg.validate(k);

  std::vector<DesignStats> stats(k);
  std::int64_t consumed_total = 0;
  const auto run_one = [&](int idx) {
    const Observation obs = sim.run(static_cast<DesignId>(idx + 1), stream);
    stats[idx] = update_stats(stats[idx], obs);
    consumed_total += obs.elapsed;
  };
  const auto consumed = [&](int idx) { return static_cast<double>(stats[idx].consumed_time); };

  if (cfg.policy == Policy::ClassicOcba) {
    std::vector<std::int64_t> targets(k, cfg.warmup_reps);
    for (int i = 0; i < k; ++i)
      while (stats[i].completed < targets[i]) run_one(i);
    for (int i = 0; i < k; ++i)
      while (stats[i].completed < 2) run_one(i);

    std::int64_t total_reps = cfg.warmup_reps * k;
    while (static_cast<double>(consumed_total) < cfg.total_budget) {
      total_reps += cfg.increment_reps;
      const auto counts =
          allocate_ocba_classic(make_allocation_inputs(stats, static_cast<double>(total_reps)),
                                total_reps);
      for (int i = 0; i < k; ++i) targets[i] = std::max(targets[i], counts[i]);
      for (int i = 0; i < k; ++i)
        while (stats[i].completed < targets[i] &&
               static_cast<double>(consumed_total) < cfg.total_budget)
          run_one(i);
    }
  } else {
    std::vector<double> targets(k, cfg.warmup_time);
    for (int i = 0; i < k; ++i)
      while (consumed(i) < targets[i]) run_one(i);
    for (int i = 0; i < k; ++i)
      while (stats[i].completed < 2) run_one(i);

    // Step 1 stopping rule compares allocated totals, not consumed time.
    double allocated_total = cfg.warmup_time * static_cast<double>(k);
    while (allocated_total < cfg.total_budget) {
      allocated_total += cfg.increment_time;
      const AllocationVector alloc =
          cfg.policy == Policy::EqualAllocation
              ? allocate_equal(k, allocated_total)
              : allocate_theorem2(make_allocation_inputs(stats, allocated_total));
      for (int i = 0; i < k; ++i) targets[i] = std::max(targets[i], alloc.budgets[i]);
      for (int i = 0; i < k; ++i)
        while (consumed(i) < targets[i]) run_one(i);
    }
  }

  SelectionReport report;
  report.selected = select_observed_best(stats);
  report.stats = std::move(stats);
  report.total_time = consumed_total;
  return report;
}

}  // namespace ocbas
