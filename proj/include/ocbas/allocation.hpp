#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ocbas/core.hpp"

namespace ocbas {

/// Per-design summary entering an allocation decision.
struct DesignSummary {
  double mean = 0.0;
  double variance = 0.0;   // floored to kVarianceFloor by make_allocation_inputs
  double mean_time = 1.0;  // >= 1
};

/// Snapshot handed to the allocation policies: guarded per-design summaries,
/// the observed best design and the stage simulation-time total.
struct AllocationInputs {
  std::vector<DesignSummary> designs;  // index i <-> design i+1
  DesignId best = 1;                   // minimal mean
  double stage_total = 0.0;
};

inline constexpr double kVarianceFloor = 1e-12;

/// Builds guarded inputs from running statistics: variance floored at
/// kVarianceFloor, mean_time from exact consumed-time accounting, best by
/// minimal mean with smallest-id tie break. Every design needs >= 2
/// completed replications.
AllocationInputs make_allocation_inputs(std::span<const DesignStats> stats, double stage_total);

/// Simulation-time allocation of Theorem 2: non-best budgets proportional to
/// sigma_i^2 mu_i / delta_{b,i}^2, the best design's budget the root of the
/// weighted sum of squares, all scaled to stage_total. Near-zero performance
/// gaps are widened to 1e-6 * max(1, |mean_b|) before squaring.
AllocationVector allocate_theorem2(const AllocationInputs& inputs);

/// Equal split of the stage total.
AllocationVector allocate_equal(int design_count, double stage_total);

/// Classic replication-count allocation: Theorem 2 with every mean_time
/// treated as 1, rounded to integers by largest remainder so the counts sum
/// to total_reps exactly.
std::vector<std::int64_t> allocate_ocba_classic(const AllocationInputs& inputs,
                                                std::int64_t total_reps);

/// Bonferroni lower-bound objective 1 - sum_{i != b} Phi(delta_{b,i} /
/// sigma_{b,i}) with sigma_{b,i}^2 = sigma_b^2 mu_b / T_b + sigma_i^2 mu_i /
/// T_i. Not clipped; can be negative for many close designs.
double apcs(const AllocationInputs& inputs, const AllocationVector& budgets);

enum class Policy { EqualAllocation, ClassicOcba, Ocbas };

const char* policy_name(Policy p);

/// Sequential-procedure configuration. warmup_time/increment_time drive the
/// time-budget policies (EA, OCBAS); warmup_reps/increment_reps drive
/// classic OCBA. total_budget is always in time units.
struct PolicyConfig {
  Policy policy = Policy::Ocbas;
  double total_budget = 0.0;
  double warmup_time = 50.0;        // T0
  double increment_time = 100.0;    // Delta_T
  std::int64_t warmup_reps = 5;     // n0
  std::int64_t increment_reps = 10; // Delta_n

  void validate(int design_count) const;
};

/// Outcome of one sequential run.
struct SelectionReport {
  DesignId selected = 0;
  std::vector<DesignStats> stats;
  std::int64_t total_time = 0;  // exact sum of all charged replication durations
};

/// Algorithm 1 driver. Warm-up per design (plus single extra replications
/// until every design has two completed, charged to the budget), then stages:
/// raise the stage total by the increment, recompute targets through the
/// policy, and run whole replications until each design's consumed time (or
/// count, for classic OCBA) reaches its target. Started replications always
/// run to completion and their full duration is charged. Time policies stop
/// once the allocated total reaches total_budget; classic OCBA stops once
/// consumed time does.
SelectionReport run_sequential(const Simulator& sim, const PolicyConfig& cfg,
                               RandomStream& stream);

}  // namespace ocbas
