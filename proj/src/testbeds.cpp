#include "ocbas/testbeds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ocbas/parallel.hpp"

namespace ocbas {

namespace {

void require_design(DesignId design, int count, const char* where) {
  if (design < 1 || design > count)
    throw std::invalid_argument(std::string(where) + ": design outside 1.." +
                                std::to_string(count));
}

void require_spread(double spread, const char* where) {
  if (!(spread >= 1.0) || !(spread <= 10.0))
    throw std::invalid_argument(std::string(where) + ": spread outside 1..10");
}

}  // namespace

double synthetic_true_mean(DesignId design) {
  require_design(design, kSyntheticDesignCount, "synthetic_true_mean");
  return static_cast<double>(design - 1);
}

std::int64_t sample_uniform_time(int spread, RandomStream& stream) {
  require_spread(spread, "sample_uniform_time");
  return stream.uniform_int(11 - spread, 9 + spread);
}

DiscretePmf truncated_gaussian_time_pmf(DesignId design, double spread) {
  require_design(design, kSyntheticDesignCount, "truncated_gaussian_time_pmf");
  require_spread(spread, "truncated_gaussian_time_pmf");
  std::vector<double> probs(19);
  double mass = 0.0;
  for (int x = 1; x <= 19; ++x) {
    const double hi = normal_cdf((static_cast<double>(x - design) + 1.5) / spread);
    const double lo = normal_cdf((static_cast<double>(x - design) + 0.5) / spread);
    probs[static_cast<std::size_t>(x - 1)] = hi - lo;
    mass += hi - lo;
  }
  for (double& p : probs) p /= mass;
  return DiscretePmf(1, std::move(probs));
}

std::int64_t sample_truncated_gaussian_time(DesignId design, double spread,
                                            RandomStream& stream) {
  const DiscretePmf pmf = truncated_gaussian_time_pmf(design, spread);
  const double u = stream.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf.probs().size(); ++i) {
    acc += pmf.probs()[i];
    if (u < acc) return pmf.support_min() + static_cast<std::int64_t>(i);
  }
  return pmf.support_max();
}

Observation sample_correlated(DesignId design, double correlation_p, RandomStream& stream) {
  require_design(design, kSyntheticDesignCount, "sample_correlated");
  if (!(correlation_p >= 0.0) || !(correlation_p <= 1.0))
    throw std::invalid_argument("sample_correlated: p outside [0,1]");
  const double noise = stream.normal(0.0, kSyntheticNoiseSigma);
  const double coin = stream.uniform01();
  const double p_long = noise >= 0.0 ? correlation_p : 1.0 - correlation_p;
  const std::int64_t elapsed = coin < p_long ? 15 : 5;
  return Observation{design, synthetic_true_mean(design) + noise, elapsed};
}

SyntheticUniformTestbed::SyntheticUniformTestbed(int spread) : spread_(spread) {
  require_spread(spread, "SyntheticUniformTestbed");
}

Observation SyntheticUniformTestbed::run(DesignId design, RandomStream& stream) const {
  require_design(design, kSyntheticDesignCount, "SyntheticUniformTestbed::run");
  const double value = synthetic_true_mean(design) + stream.normal(0.0, kSyntheticNoiseSigma);
  return Observation{design, value, sample_uniform_time(spread_, stream)};
}

SyntheticTruncGaussTestbed::SyntheticTruncGaussTestbed(double spread) {
  require_spread(spread, "SyntheticTruncGaussTestbed");
  cumulative_.resize(kSyntheticDesignCount);
  for (int design = 1; design <= kSyntheticDesignCount; ++design) {
    const DiscretePmf pmf = truncated_gaussian_time_pmf(design, spread);
    double acc = 0.0;
    for (int x = 0; x < 19; ++x) {
      acc += pmf.probs()[static_cast<std::size_t>(x)];
      cumulative_[static_cast<std::size_t>(design - 1)][static_cast<std::size_t>(x)] = acc;
    }
  }
}

Observation SyntheticTruncGaussTestbed::run(DesignId design, RandomStream& stream) const {
  require_design(design, kSyntheticDesignCount, "SyntheticTruncGaussTestbed::run");
  const double value = synthetic_true_mean(design) + stream.normal(0.0, kSyntheticNoiseSigma);
  const auto& cdf = cumulative_[static_cast<std::size_t>(design - 1)];
  const double u = stream.uniform01();
  std::int64_t elapsed = 19;
  for (int x = 0; x < 19; ++x) {
    if (u < cdf[static_cast<std::size_t>(x)]) {
      elapsed = x + 1;
      break;
    }
  }
  return Observation{design, value, elapsed};
}

CorrelatedTestbed::CorrelatedTestbed(double correlation_p) : p_(correlation_p) {
  if (!(correlation_p >= 0.0) || !(correlation_p <= 1.0))
    throw std::invalid_argument("CorrelatedTestbed: p outside [0,1]");
}

Observation CorrelatedTestbed::run(DesignId design, RandomStream& stream) const {
  return sample_correlated(design, p_, stream);
}

// --- smoke detection ---

namespace {

constexpr int kSensorCoord[3] = {2, 5, 8};

bool on_grid(GridPos p) {
  return p.x >= 0 && p.x < kGridSize && p.y >= 0 && p.y < kGridSize;
}

// sqrt lookup over all squared distances reachable from moves around the
// lattice (one coordinate may sit just off-grid at -1 or 11)
double distance_to(GridPos a, GridPos b) {
  static const auto table = [] {
    std::array<double, 222> t{};
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::sqrt(static_cast<double>(i));
    return t;
  }();
  const int dx = a.x - b.x;
  const int dy = a.y - b.y;
  return table[static_cast<std::size_t>(dx * dx + dy * dy)];
}

void require_placement(const Placement& placement, const char* where) {
  if (!(placement[0] >= 1 && placement[0] < placement[1] && placement[1] < placement[2] &&
        placement[2] <= kSensorCandidates))
    throw std::invalid_argument(std::string(where) +
                                ": placement must be 3 distinct candidates in 1..9, sorted");
}

// the eight symmetries of the 3x3 candidate array, as index maps over 0..8
using CandidateMap = std::array<int, 9>;

std::array<CandidateMap, 8> candidate_symmetries() {
  const auto make = [](auto&& transform) {
    CandidateMap map{};
    for (int gy = 0; gy < 3; ++gy)
      for (int gx = 0; gx < 3; ++gx) {
        const auto [tx, ty] = transform(gx, gy);
        map[static_cast<std::size_t>(gy * 3 + gx)] = ty * 3 + tx;
      }
    return map;
  };
  return {
      make([](int gx, int gy) { return std::pair{gx, gy}; }),
      make([](int gx, int gy) { return std::pair{2 - gy, gx}; }),
      make([](int gx, int gy) { return std::pair{2 - gx, 2 - gy}; }),
      make([](int gx, int gy) { return std::pair{gy, 2 - gx}; }),
      make([](int gx, int gy) { return std::pair{2 - gx, gy}; }),
      make([](int gx, int gy) { return std::pair{gx, 2 - gy}; }),
      make([](int gx, int gy) { return std::pair{gy, gx}; }),
      make([](int gx, int gy) { return std::pair{2 - gy, 2 - gx}; }),
  };
}

}  // namespace

GridPos sensor_position(int candidate) {
  if (candidate < 1 || candidate > kSensorCandidates)
    throw std::invalid_argument("sensor_position: candidate outside 1..9");
  const int gx = (candidate - 1) % 3;
  const int gy = (candidate - 1) / 3;
  return GridPos{kSensorCoord[gx], kSensorCoord[gy]};
}

GridPos smoke_step(GridPos particle, GridPos source, RandomStream& stream) {
  const GridPos dests[4] = {{particle.x + 1, particle.y},
                            {particle.x - 1, particle.y},
                            {particle.x, particle.y + 1},
                            {particle.x, particle.y - 1}};
  double weight[4];
  double total = 0.0;
  for (int d = 0; d < 4; ++d) total += weight[d] = distance_to(dests[d], source);
  const double u = stream.uniform01() * total;
  int pick = 3;
  double acc = 0.0;
  for (int d = 0; d < 4; ++d) {
    acc += weight[d];
    if (u < acc) {
      pick = d;
      break;
    }
  }
  GridPos next = dests[pick];
  if (!on_grid(next)) {
    // bounced back: the blocked step reverses
    next = GridPos{2 * particle.x - next.x, 2 * particle.y - next.y};
  }
  return next;
}

Observation simulate_response_time(const SmokeSpec& spec, RandomStream& stream) {
  require_placement(spec.placement, "simulate_response_time");
  if (spec.horizon < 1) throw std::invalid_argument("simulate_response_time: horizon must be >= 1");

  bool sensor_cell[kGridSize * kGridSize] = {};
  for (int s : spec.placement) {
    const GridPos pos = sensor_position(s);
    sensor_cell[pos.y * kGridSize + pos.x] = true;
  }
  const auto detected = [&](GridPos p) { return sensor_cell[p.y * kGridSize + p.x]; };

  // fire sources are uniform over the 81 cells strictly inside the AoI
  const GridPos source{static_cast<int>(stream.uniform_int(1, kGridSize - 2)),
                       static_cast<int>(stream.uniform_int(1, kGridSize - 2))};
  std::vector<GridPos> particles;
  particles.reserve(64);
  for (std::int64_t slot = 1; slot <= spec.horizon; ++slot) {
    particles.push_back(source);
    if (detected(source)) return Observation{0, static_cast<double>(slot), slot};
    for (GridPos& p : particles) {
      p = smoke_step(p, source, stream);
      if (detected(p)) return Observation{0, static_cast<double>(slot), slot};
    }
  }
  throw std::runtime_error("simulate_response_time: horizon " + std::to_string(spec.horizon) +
                           " exceeded without detection");
}

std::vector<Placement> enumerate_placements() {
  std::vector<Placement> out;
  out.reserve(84);
  for (int a = 1; a <= kSensorCandidates; ++a)
    for (int b = a + 1; b <= kSensorCandidates; ++b)
      for (int c = b + 1; c <= kSensorCandidates; ++c) out.push_back(Placement{a, b, c});
  return out;
}

std::vector<PlacementOrbit> symmetry_reduce(const std::vector<Placement>& placements) {
  static const auto symmetries = candidate_symmetries();
  std::map<Placement, std::vector<Placement>> orbits;
  for (const Placement& placement : placements) {
    require_placement(placement, "symmetry_reduce");
    Placement representative{10, 10, 10};
    for (const CandidateMap& map : symmetries) {
      Placement image;
      for (int j = 0; j < 3; ++j)
        image[static_cast<std::size_t>(j)] =
            map[static_cast<std::size_t>(placement[static_cast<std::size_t>(j)] - 1)] + 1;
      std::sort(image.begin(), image.end());
      representative = std::min(representative, image);
    }
    orbits[representative].push_back(placement);
  }
  std::vector<PlacementOrbit> out;
  out.reserve(orbits.size());
  for (auto& [rep, members] : orbits) out.push_back(PlacementOrbit{rep, std::move(members)});
  return out;
}

std::vector<Placement> representative_placements() {
  std::vector<Placement> out;
  for (const PlacementOrbit& orbit : symmetry_reduce(enumerate_placements()))
    out.push_back(orbit.representative);
  return out;
}

SmokeTestbed::SmokeTestbed(std::int64_t horizon, std::optional<DesignId> true_best)
    : designs_(representative_placements()), horizon_(horizon), true_best_(true_best) {
  if (horizon < 1) throw std::invalid_argument("SmokeTestbed: horizon must be >= 1");
  if (true_best && (*true_best < 1 || *true_best > static_cast<int>(designs_.size())))
    throw std::invalid_argument("SmokeTestbed: true_best outside design range");
}

Observation SmokeTestbed::run(DesignId design, RandomStream& stream) const {
  require_design(design, design_count(), "SmokeTestbed::run");
  Observation obs = simulate_response_time(
      SmokeSpec{designs_[static_cast<std::size_t>(design - 1)], horizon_}, stream);
  obs.design = design;
  return obs;
}

std::vector<DesignMeanRow> estimate_design_means(std::int64_t reps, std::uint64_t seed,
                                                 int workers, std::int64_t horizon) {
  if (reps < 1) throw std::invalid_argument("estimate_design_means: reps must be >= 1");
  const std::vector<Placement> designs = representative_placements();
  const auto design_count = static_cast<std::int64_t>(designs.size());

  // integer accumulators commute, so worker scheduling cannot change the sums
  std::vector<std::atomic<std::int64_t>> sums(designs.size());
  std::vector<std::atomic<std::int64_t>> sq_sums(designs.size());
  parallel_for_index(design_count * reps, workers, [&](std::int64_t index) {
    const std::int64_t d = index / reps;
    const std::int64_t r = index % reps;
    RandomStream stream(mix_seed(seed, static_cast<std::uint64_t>(d + 1),
                                 static_cast<std::uint64_t>(r)));
    const Observation obs =
        simulate_response_time(SmokeSpec{designs[static_cast<std::size_t>(d)], horizon}, stream);
    sums[static_cast<std::size_t>(d)].fetch_add(obs.elapsed, std::memory_order_relaxed);
    sq_sums[static_cast<std::size_t>(d)].fetch_add(obs.elapsed * obs.elapsed,
                                                   std::memory_order_relaxed);
  });

  std::vector<DesignMeanRow> rows;
  rows.reserve(designs.size());
  for (std::size_t d = 0; d < designs.size(); ++d) {
    const double n = static_cast<double>(reps);
    const double sum = static_cast<double>(sums[d].load());
    const double sq = static_cast<double>(sq_sums[d].load());
    const double mean = sum / n;
    double std_err = 0.0;
    if (reps >= 2) {
      const double sample_var = std::max(0.0, (sq - sum * sum / n) / (n - 1.0));
      std_err = std::sqrt(sample_var / n);
    }
    rows.push_back(DesignMeanRow{static_cast<int>(d + 1), designs[d], mean, std_err, reps});
  }
  return rows;
}

}  // namespace ocbas
