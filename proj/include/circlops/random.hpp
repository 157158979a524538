#pragma once

#include <cstdint>
#include <random>

#include "circlops/circle_diffeo.hpp"
#include "circlops/periodic_function.hpp"

namespace circlops {

/// Seeded generator with a platform-independent uniform draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Band-limited random function with 1/(1+k)² mode weights, scaled so the
/// coefficient norm (a bound on sup |f|) equals `amplitude`.
PeriodicFunction random_function(Rng& rng, int band, double amplitude, bool zero_mean = false);

/// Random displacement with 2^{-k} mode weights, sup |f| ≤ amplitude and sup |f'| ≤ 0.5.
CircleDiffeo random_diffeo(Rng& rng, int band, double amplitude);

}  // namespace circlops
