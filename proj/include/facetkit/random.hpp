#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "facetkit/linalg.hpp"

namespace facetkit {

// Counter-based random stream. Every draw is a pure function of
// (seed, stream, counter), so sample i of a run never depends on how many
// workers produced samples 0..i-1.
//
//   bits(seed, stream, k) = splitmix64(splitmix64(seed ^ (stream * G)) + k * G)
//   uniform               = (bits >> 11) * 2^-53             in [0, 1)
//   gaussian pair         = Box-Muller on (1 - u0, u1)
//
// with G = 0x9E3779B97F4A7C15 and splitmix64 the standard finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(splitmix64(seed ^ (stream * kGolden))) {}

  std::uint64_t bits(std::uint64_t k) const { return splitmix64(key_ + k * kGolden); }

  std::uint64_t next_bits() { return bits(counter_++); }

  double uniform() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u0 = 1.0 - uniform();
    const double u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u0));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u1);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u1);
  }

  std::uint64_t below(std::uint64_t n) { return next_bits() % n; }

  Vec gaussian_vector(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

  /// Uniform on the unit sphere S^{n-1}.
  Vec sphere(Eigen::Index n) {
    for (;;) {
      Vec v = gaussian_vector(n);
      const double r = v.norm();
      if (r > 1e-300) return v / r;
    }
  }

  void seek(std::uint64_t counter) {
    counter_ = counter;
    has_spare_ = false;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stream positioned for sample `index` of a run: each sample owns a
/// disjoint block of 2^16 counters.
inline CounterRng sample_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  CounterRng rng(seed, stream);
  rng.seek(index << 16);
  return rng;
}

} // namespace facetkit
