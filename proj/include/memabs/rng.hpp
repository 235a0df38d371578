#pragma once

#include <cstdint>
#include <span>

namespace memabs {

// Counter-based pseudo-random stream (splitmix64 core). A stream is keyed by
// (master seed, stream index): every draw depends only on the key and the
// draw counter, so per-trajectory streams are independent of scheduling
// order and of how many other streams exist.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : state_(mix(master_seed + kGamma) ^ mix((stream_index + 1) * kStreamSalt)) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  bool bernoulli(double p) { return next_double() < p; }

  // Index of the first cell whose cumulative probability exceeds the draw.
  // Falls through to the last cell so a row summing to slightly below one
  // cannot produce an out-of-range index.
  std::size_t categorical(std::span<const double> probs) {
    const double u = next_double();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kStreamSalt = 0xBF58476D1CE4E5B9ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace memabs
