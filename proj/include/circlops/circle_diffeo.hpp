#pragma once

#include "circlops/periodic_function.hpp"

namespace circlops {

/// Lift F(x) = x + f(x) of an orientation-preserving circle diffeomorphism.
/// F commutes with the deck transformation x ↦ x + 1 by construction; the
/// constructor certifies F' > 0 on a grid of at least 8·band points.
class CircleDiffeo {
 public:
  explicit CircleDiffeo(PeriodicFunction displacement);

  static CircleDiffeo identity() { return CircleDiffeo(PeriodicFunction{}); }
  static CircleDiffeo rotation(double shift) { return CircleDiffeo(PeriodicFunction::constant(shift)); }

  const PeriodicFunction& displacement() const { return displacement_; }
  /// Minimum of F' over the certification grid.
  double orientation_certificate() const { return min_slope_; }

  double operator()(double x) const { return x + displacement_(x); }
  /// F^{(order)}(x) for order ≥ 1.
  double derivative(double x, int order = 1) const;

  /// Solves F(x) = y by Newton iteration (tolerance 1e-12, at most 50 steps).
  double inverse_at(double y) const;
  /// F⁻¹, with displacement re-projected to `band` from 8·band grid values.
  CircleDiffeo inverse(int band = kDefaultBand) const;
  /// this ∘ inner, re-projected to `band`.
  CircleDiffeo compose(const CircleDiffeo& inner, int band = kDefaultBand) const;

 private:
  PeriodicFunction displacement_;
  PeriodicFunction slope_;  // f'
  PeriodicFunction curvature_;  // f''
  PeriodicFunction jerk_;  // f'''
  double min_slope_ = 1.0;
};

/// Number of grid points used to re-project onto band `band`.
inline int projection_grid(int band) { return 8 * (band < 4 ? 4 : band); }

/// F*: φ|∂x|^r ↦ (F')^r (φ∘F) |∂x|^r, re-projected to `band`.
PeriodicFunction pullback_density(const CircleDiffeo& F, const PeriodicFunction& f, double r, int band = kDefaultBand);

/// 𝒮(F) = F'''/F' − (3/2)(F''/F')², re-projected to `band`.
PeriodicFunction schwarzian(const CircleDiffeo& F, int band = kDefaultBand);

}  // namespace circlops
