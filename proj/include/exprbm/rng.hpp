#pragma once

#include <cmath>
#include <cstdint>

namespace exprbm {

// Counter-based stream: each output is a hash of (key, counter), where the
// key is derived from (seed, stream_id). Streams with distinct ids are
// statistically independent, a stream's output depends only on its position,
// and the whole construction is reproducible bit-for-bit across runs.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    key_ = mix64(seed + 0x9E3779B97F4A7C15ull);
    key_ ^= mix64(stream_id + 0xD1B54A32D192ED03ull);
  }

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ull;
    return mix64(key_ + counter_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Unbiased integer in [0, n); rejection on the top band.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return r % n;
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Reserved stream ids used by the trainer; per-example streams start at
// kExampleStreamBase + visit index so that batch parallelism cannot change
// what any example samples.
inline constexpr std::uint64_t kInitStream = 0;
inline constexpr std::uint64_t kShuffleStream = 1;
inline constexpr std::uint64_t kChainStream = 2;
inline constexpr std::uint64_t kExampleStreamBase = 1024;

}  // namespace exprbm
