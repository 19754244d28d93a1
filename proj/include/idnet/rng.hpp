#pragma once

#include <cstdint>

namespace idnet {

/// SplitMix64 generator (Steele/Lea/Flood constants). All randomness in the
/// library flows through this type so that a (seed, stream) pair fully
/// determines every draw, independent of platform and thread count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Derives a decorrelated substream. Used for per-trial and per-worker
  /// streams: stream(seed, i) and stream(seed, j) are independent sequences
  /// for i != j, so partitioning work across threads cannot change results.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_id) {
    SplitMix64 mixer(seed);
    std::uint64_t base = mixer.next();
    SplitMix64 g(base ^ (stream_id * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
    g.next();
    return g;
  }

 private:
  std::uint64_t state_;
};

}  // namespace idnet
