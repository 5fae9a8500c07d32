#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace bj {

/// Deterministic random source. Uses splitmix64 for seeding/sub-seed
/// derivation and xoshiro256** for the stream, with hand-rolled uniform and
/// normal transforms so that output is identical across platforms and
/// standard-library versions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  /// Independent stream for trial `index` of a run seeded with `seed`.
  static Rng for_trial(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    return Rng(a ^ (index * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  /// Integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Standard normal draw (Box-Muller, no spare caching).
  double normal() {
    double u1 = u01();
    while (u1 <= 0.0) u1 = u01();
    const double u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::vector<double> normal_vector(int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& c : v) c = normal();
    return v;
  }

private:
  static std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace bj
