#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ocbas/core.hpp"
#include "ocbas/renewal.hpp"
#include "ocbas/rng.hpp"

namespace ocbas {

// --- Synthetic design families: 10 designs, true means J_i = i - 1,
// --- i.i.d. N(0, 6^2) performance noise, configurable duration models.

inline constexpr int kSyntheticDesignCount = 10;
inline constexpr double kSyntheticNoiseSigma = 6.0;

/// True performance of synthetic design i (1-based): i - 1.
double synthetic_true_mean(DesignId design);

/// Integer duration uniform on [11 - spread, 9 + spread]; mean 10 for every
/// spread in 1..10 (spread 1 degenerates to the single value 10).
std::int64_t sample_uniform_time(int spread, RandomStream& stream);

/// Duration PMF on 1..19 with mass proportional to
/// Phi((x - i + 1.5) / spread) - Phi((x - i + 0.5) / spread); each design has
/// its own distribution.
DiscretePmf truncated_gaussian_time_pmf(DesignId design, double spread);

std::int64_t sample_truncated_gaussian_time(DesignId design, double spread, RandomStream& stream);

/// Sign-correlated duration/noise pair: w ~ N(0, 6^2); for w >= 0 the
/// duration is 15 with probability p (5 otherwise), for w < 0 the roles of p
/// and 1 - p swap. p = 0.5 makes duration and noise independent.
Observation sample_correlated(DesignId design, double correlation_p, RandomStream& stream);

/// Simulators for the three synthetic families.
class SyntheticUniformTestbed final : public Simulator {
 public:
  explicit SyntheticUniformTestbed(int spread);
  int design_count() const override { return kSyntheticDesignCount; }
  Observation run(DesignId design, RandomStream& stream) const override;
  static ProblemSpec problem() { return ProblemSpec(kSyntheticDesignCount, 1); }

 private:
  int spread_;
};

class SyntheticTruncGaussTestbed final : public Simulator {
 public:
  explicit SyntheticTruncGaussTestbed(double spread);
  int design_count() const override { return kSyntheticDesignCount; }
  Observation run(DesignId design, RandomStream& stream) const override;
  static ProblemSpec problem() { return ProblemSpec(kSyntheticDesignCount, 1); }

 private:
  // cumulative tables per design, support 1..19
  std::vector<std::array<double, 19>> cumulative_;
};

class CorrelatedTestbed final : public Simulator {
 public:
  explicit CorrelatedTestbed(double correlation_p);
  int design_count() const override { return kSyntheticDesignCount; }
  Observation run(DesignId design, RandomStream& stream) const override;
  static ProblemSpec problem() { return ProblemSpec(kSyntheticDesignCount, 1); }

 private:
  double p_;
};

// --- Smoke-detection sensor placement: 11x11 lattice, 9 sensor candidate
// --- cells at {2,5,8} x {2,5,8}, 3 sensors per design.

inline constexpr int kGridSize = 11;  // coordinates 0..10
inline constexpr int kSensorCandidates = 9;

struct GridPos {
  int x = 0;
  int y = 0;
  bool operator==(const GridPos&) const = default;
};

using Placement = std::array<int, 3>;  // sorted candidate ids, 1..9

/// Lattice cell of sensor candidate 1..9 (row-major over the 3x3 array).
GridPos sensor_position(int candidate);

/// One random-walk step: the four axis neighbours are weighted by their
/// Euclidean distance to the fire source; a step that would leave the
/// lattice is bounced back, reversing into the opposite cell.
GridPos smoke_step(GridPos particle, GridPos source, RandomStream& stream);

struct SmokeSpec {
  Placement placement{1, 2, 3};
  std::int64_t horizon = 1'000'000;
};

/// Full detection simulation: the fire source is uniform over the 81 cells
/// strictly inside the AoI; each slot spawns one particle at the source and
/// then advances every live particle one step; returns the first slot in
/// which any particle (including one just spawned) sits on a sensor. The
/// observation's value and elapsed time are both that slot count.
Observation simulate_response_time(const SmokeSpec& spec, RandomStream& stream);

/// All C(9,3) = 84 sensor placements in lexicographic order.
std::vector<Placement> enumerate_placements();

struct PlacementOrbit {
  Placement representative;  // lexicographic minimum of the orbit
  std::vector<Placement> members;
};

/// Orbits of the placements under the 8 symmetries of the square; the 84
/// placements collapse to 16 orbits.
std::vector<PlacementOrbit> symmetry_reduce(const std::vector<Placement>& placements);

/// The 16 orbit representatives in lexicographic order.
std::vector<Placement> representative_placements();

/// Simulator over the 16 representative placements (design i maps to the
/// i-th representative).
class SmokeTestbed final : public Simulator {
 public:
  explicit SmokeTestbed(std::int64_t horizon = 1'000'000,
                        std::optional<DesignId> true_best = std::nullopt);
  int design_count() const override { return static_cast<int>(designs_.size()); }
  Observation run(DesignId design, RandomStream& stream) const override;
  ProblemSpec problem() const {
    return ProblemSpec(static_cast<int>(designs_.size()), true_best_);
  }
  const Placement& placement(DesignId design) const { return designs_[design - 1]; }

 private:
  std::vector<Placement> designs_;
  std::int64_t horizon_;
  std::optional<DesignId> true_best_;
};

struct DesignMeanRow {
  int index = 0;  // 1..16
  Placement placement{};
  double mean = 0.0;
  double std_err = 0.0;
  std::int64_t reps = 0;
};

/// Sample mean and standard error of the response time of each of the 16
/// representative designs. Replication r of design d runs on a stream seeded
/// from (seed, d, r), so the table is independent of worker count.
std::vector<DesignMeanRow> estimate_design_means(std::int64_t reps, std::uint64_t seed,
                                                 int workers = 1,
                                                 std::int64_t horizon = 1'000'000);

}  // namespace ocbas
