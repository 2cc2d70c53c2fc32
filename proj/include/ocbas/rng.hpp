#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ocbas {

/// splitmix64 finalizer; used both as a stand-alone mixer and to spread
/// low-entropy seeds before they reach the main engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-stable combination of seed components (base seed, policy tag,
/// budget bits, replication index, ...). Feeding the same components in the
/// same order always yields the same stream seed, independent of which
/// worker thread consumes it.
inline std::uint64_t mix_seed(std::uint64_t acc, std::uint64_t next) {
  return splitmix64(acc ^ (next + 0x9e3779b97f4a7c15ULL + (acc << 6) + (acc >> 2)));
}

template <typename... Rest>
inline std::uint64_t mix_seed(std::uint64_t acc, std::uint64_t next, Rest... rest) {
  return mix_seed(mix_seed(acc, next), rest...);
}

/// Seeded random stream. Wraps mt19937_64 with fixed-algorithm draws so a
/// given seed reproduces the same sequence on every platform; distribution
/// shapes from <random> are implementation-defined and are avoided here.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi], inclusive. Bias is O(range/2^64).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    const auto wide = static_cast<unsigned __int128>(engine_()) * range;
    return lo + static_cast<std::int64_t>(wide >> 64);
  }

  /// Standard normal via Box-Muller; second deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ocbas
