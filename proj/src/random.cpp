#include "circlops/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace circlops {

namespace {

template <class Weight>
PeriodicFunction weighted(Rng& rng, int band, Weight weight, bool zero_mean) {
  std::vector<double> c(static_cast<std::size_t>(2 * band + 1));
  c[0] = zero_mean ? 0.0 : rng.uniform(-1.0, 1.0);
  for (int k = 1; k <= band; ++k) {
    const double w = weight(k);
    c[static_cast<std::size_t>(2 * k - 1)] = w * rng.uniform(-1.0, 1.0);
    c[static_cast<std::size_t>(2 * k)] = w * rng.uniform(-1.0, 1.0);
  }
  return PeriodicFunction(band, std::move(c));
}

}  // namespace

PeriodicFunction random_function(Rng& rng, int band, double amplitude, bool zero_mean) {
  PeriodicFunction f = weighted(rng, band, [](int k) { return 1.0 / ((1.0 + k) * (1.0 + k)); }, zero_mean);
  const double norm = f.coefficient_norm();
  if (norm == 0.0 || amplitude == 0.0) return PeriodicFunction(band);
  return f * (amplitude / norm);
}

CircleDiffeo random_diffeo(Rng& rng, int band, double amplitude) {
  PeriodicFunction f = weighted(rng, band, [](int k) { return std::ldexp(1.0, -k); }, true);
  const double norm = f.coefficient_norm();
  if (norm == 0.0 || amplitude == 0.0) return CircleDiffeo::identity();
  f *= amplitude / norm;
  const double slope = f.derivative().coefficient_norm();
  if (slope > 0.5) f *= 0.5 / slope;
  return CircleDiffeo(std::move(f));
}

}  // namespace circlops
