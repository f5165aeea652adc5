#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace l0ssc {

// SplitMix64: counter-based 64-bit generator. State advances by a fixed odd
// increment and the output is a bijective mix of the counter, so any stream
// position is addressable and two streams with different keys never share a
// sequence in practice. All sampling in this library goes through this type;
// nothing uses <random> distributions, whose output is implementation
// defined. Same seed, same platform-independent bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Stream derivation: feed the parent seed and up to two key words through
  // the mixer. Used to give every sampled object (point, basis, restart) its
  // own stream keyed by (seed, role, index).
  static Rng stream(std::uint64_t seed, std::uint64_t key0, std::uint64_t key1 = 0) {
    std::uint64_t s = mix(seed ^ 0xd6e8feb86659fd93ull);
    s = mix(s ^ key0);
    s = mix(s ^ key1);
    return Rng(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform in [0, 1), 53 mantissa bits.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in {0, ..., n-1} by rejection; unbiased.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v > limit);
    return v % n;
  }

  // Standard normal via Box-Muller; the pair's second value is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double rademacher() { return (next_u64() & 1ull) ? 1.0 : -1.0; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream roles, kept distinct so the same (seed, index) pair never collides
// across object kinds.
namespace stream_role {
inline constexpr std::uint64_t basis = 0x01;
inline constexpr std::uint64_t point = 0x02;
inline constexpr std::uint64_t noise = 0x03;
inline constexpr std::uint64_t projector = 0x04;
inline constexpr std::uint64_t cluster = 0x05;
inline constexpr std::uint64_t trial = 0x06;
}  // namespace stream_role

}  // namespace l0ssc
