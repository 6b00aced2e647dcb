#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace acrnn {

// xoshiro256++ with splitmix64 seeding. Hand-rolled so that seeded runs are
// bit-identical across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), n > 0. Multiply-shift rejection-free mapping.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; the spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Derives independent stream seeds from a master seed, e.g.
  // mix(seed, kStreamInit) or mix(mix(seed, kStreamBatch), iteration).
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(x);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream tags for deriving per-purpose RNGs from one master seed.
inline constexpr std::uint64_t kStreamInit = 0x696e6974ULL;      // parameter init
inline constexpr std::uint64_t kStreamWindows = 0x77696e64ULL;   // window rotations
inline constexpr std::uint64_t kStreamBatch = 0x62617463ULL;     // batch sampling
inline constexpr std::uint64_t kStreamMask = 0x6d61736bULL;      // stochastic schedules
inline constexpr std::uint64_t kStreamEval = 0x6576616cULL;      // evaluation seeds
inline constexpr std::uint64_t kStreamGen = 0x67656e20ULL;       // synthetic data

}  // namespace acrnn
