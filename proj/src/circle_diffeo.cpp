#include "circlops/circle_diffeo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "circlops/error.hpp"

namespace circlops {

namespace {

// Trailing modes at the sampling noise floor only feed noise into high
// derivatives. Rounding of size ε·sup|h| in m samples leaves about
// ε·sup|h|·√(2/m) in each projected coefficient.
PeriodicFunction denoised(const PeriodicFunction& f, const std::vector<double>& samples) {
  double peak = 0.0;
  for (double v : samples) peak = std::max(peak, std::abs(v));
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * peak * std::sqrt(2.0 / static_cast<double>(samples.size()));
  int keep = f.band_limit();
  while (keep > 0 && std::abs(f.cos_coeff(keep)) <= floor && std::abs(f.sin_coeff(keep)) <= floor) --keep;
  return f.truncated(keep);
}

}  // namespace

CircleDiffeo::CircleDiffeo(PeriodicFunction displacement)
    : displacement_(std::move(displacement)),
      slope_(displacement_.derivative()),
      curvature_(slope_.derivative()),
      jerk_(curvature_.derivative()) {
  const int grid = std::max(64, 8 * displacement_.band_limit());
  auto samples = slope_.sample(grid);
  min_slope_ = 1.0 + *std::min_element(samples.begin(), samples.end());
  if (!(min_slope_ > 0.0)) throw InvalidInput("CircleDiffeo: F' is not positive on the certification grid");
}

double CircleDiffeo::derivative(double x, int order) const {
  switch (order) {
    case 1: return 1.0 + slope_(x);
    case 2: return curvature_(x);
    case 3: return jerk_(x);
    default:
      if (order < 1) throw InvalidInput("CircleDiffeo::derivative: order must be >= 1");
      return displacement_.derivative(order)(x);
  }
}

double CircleDiffeo::inverse_at(double y) const {
  double x = y - displacement_(y);
  for (int iter = 0; iter < 50; ++iter) {
    const double step = ((*this)(x) - y) / derivative(x);
    x -= step;
    if (std::abs(step) <= 1e-12) return x;
  }
  throw ComputationFailure("CircleDiffeo::inverse_at: Newton iteration did not converge");
}

CircleDiffeo CircleDiffeo::inverse(int band) const {
  const int m = projection_grid(band);
  std::vector<double> g(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double y = static_cast<double>(j) / m;
    g[static_cast<std::size_t>(j)] = inverse_at(y) - y;
  }
  return CircleDiffeo(denoised(PeriodicFunction::from_samples(g, band), g));
}

CircleDiffeo CircleDiffeo::compose(const CircleDiffeo& inner, int band) const {
  const int m = projection_grid(band);
  std::vector<double> h(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double x = static_cast<double>(j) / m;
    // Displacements only: forming F(G(x)) − x would cost an ulp of x per sample.
    const double g = inner.displacement()(x);
    h[static_cast<std::size_t>(j)] = g + displacement_(x + g);
  }
  return CircleDiffeo(denoised(PeriodicFunction::from_samples(h, band), h));
}

PeriodicFunction pullback_density(const CircleDiffeo& F, const PeriodicFunction& f, double r, int band) {
  const int m = projection_grid(band);
  std::vector<double> values(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double x = static_cast<double>(j) / m;
    const double weight = r == 0.0 ? 1.0 : std::pow(F.derivative(x), r);
    values[static_cast<std::size_t>(j)] = weight * f(F(x));
  }
  return PeriodicFunction::from_samples(values, band);
}

PeriodicFunction schwarzian(const CircleDiffeo& F, int band) {
  const int m = projection_grid(band);
  std::vector<double> values(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double x = static_cast<double>(j) / m;
    const double d1 = F.derivative(x, 1);
    const double ratio = F.derivative(x, 2) / d1;
    values[static_cast<std::size_t>(j)] = F.derivative(x, 3) / d1 - 1.5 * ratio * ratio;
  }
  return PeriodicFunction::from_samples(values, band);
}

}  // namespace circlops
