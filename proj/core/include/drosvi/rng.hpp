#pragma once

#include <cmath>
#include <cstdint>

namespace drosvi {

/// Deterministic 64-bit generator (splitmix64). Used everywhere a random
/// draw is needed so that results are reproducible bit-for-bit across
/// platforms; std::uniform_real_distribution is not portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform draw in the half-open interval [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal via Box-Muller (deterministic; consumes two uniforms).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    const double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Stream split: instance i of a batch uses seed ^ mix(i).
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) {
    return seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)) ^ salt;
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace drosvi
