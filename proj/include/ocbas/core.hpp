#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ocbas/rng.hpp"

namespace ocbas {

/// Designs are numbered 1..k throughout.
using DesignId = int;

/// The design set under comparison. true_best is known only for synthetic
/// testbeds and is used for PCS scoring.
struct ProblemSpec {
  int design_count = 0;
  std::optional<DesignId> true_best;

  explicit ProblemSpec(int k, std::optional<DesignId> best = std::nullopt);
};

/// One completed replication: a performance sample together with the integer
/// number of time units the replication consumed.
struct Observation {
  DesignId design = 0;
  double value = 0.0;
  std::int64_t elapsed = 0;  // >= 1
};

/// Running per-design statistics: replication count, Welford mean/M2 and the
/// exact integer amount of simulation time consumed so far.
struct DesignStats {
  std::int64_t completed = 0;
  double mean = 0.0;
  double m2 = 0.0;
  std::int64_t consumed_time = 0;

  /// Sample variance m2/(n-1); unavailable below two replications.
  std::optional<double> sample_variance() const {
    if (completed < 2) return std::nullopt;
    return m2 / static_cast<double>(completed - 1);
  }

  /// Mean replication duration; requires at least one completed replication.
  double mean_time() const;
};

/// Per-design simulation-time budgets for one allocation stage.
struct AllocationVector {
  std::vector<double> budgets;  // index i <-> design i+1

  double total() const;
};

/// One replication of one design. Implementations must be pure given the
/// stream: independent streams give independent observations and a fixed
/// seed reproduces the observation exactly. Implementations are const so a
/// single instance can serve many threads.
class Simulator {
 public:
  virtual ~Simulator() = default;
  virtual int design_count() const = 0;
  virtual Observation run(DesignId design, RandomStream& stream) const = 0;
};

/// Folds one observation into the running statistics (one-pass Welford
/// update; consumed time accumulates in exact integer arithmetic).
DesignStats update_stats(const DesignStats& stats, const Observation& obs);

/// Design with the minimal sample mean; ties break to the smallest id.
/// Throws if any design has no completed replication.
DesignId select_observed_best(std::span<const DesignStats> all_stats);

}  // namespace ocbas
