#pragma once

#include <span>
#include <vector>

namespace circlops {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr int kDefaultBand = 32;

/// Real trigonometric polynomial of period 1,
///
///   f(θ) = a₀ + Σ_{k=1..N} c_k cos(2πkθ) + s_k sin(2πkθ),
///
/// stored flat as [a₀, c₁, s₁, …, c_N, s_N]. N is the band limit. Products
/// grow the band exactly; truncation is always an explicit call.
class PeriodicFunction {
 public:
  PeriodicFunction() : coeffs_(1, 0.0) {}
  explicit PeriodicFunction(int band);
  PeriodicFunction(int band, std::vector<double> coeffs);

  static PeriodicFunction constant(double value) { return PeriodicFunction(0, {value}); }
  static PeriodicFunction cosine(int k, double amplitude = 1.0);
  static PeriodicFunction sine(int k, double amplitude = 1.0);

  /// Least-squares (DFT) projection of `samples` taken at θ_j = j/M onto
  /// band `band`. Requires 2·band < M.
  static PeriodicFunction from_samples(std::span<const double> samples, int band);

  int band_limit() const { return static_cast<int>(coeffs_.size() / 2); }
  std::span<const double> coefficients() const { return coeffs_; }
  double mean() const { return coeffs_[0]; }
  double cos_coeff(int k) const;
  double sin_coeff(int k) const;

  double operator()(double theta) const;
  /// Values at θ_j = (j + offset)/count, j = 0..count-1.
  std::vector<double> sample(int count, double offset = 0.0) const;

  PeriodicFunction derivative(int order = 1) const;
  /// Zero-mean antiderivative; the mean of *this is ignored.
  PeriodicFunction antiderivative() const;
  PeriodicFunction truncated(int band) const;
  /// Sum of |coefficients| that truncated(band) discards.
  double truncation_residual(int band) const;

  double integral() const { return coeffs_[0]; }
  /// Max |f| over a grid of 16·(N+1) points.
  double sup_norm() const;
  /// Σ|coefficients|, an upper bound for sup |f|.
  double coefficient_norm() const;
  bool is_zero() const;

  PeriodicFunction& operator+=(const PeriodicFunction& other);
  PeriodicFunction& operator-=(const PeriodicFunction& other);
  PeriodicFunction& operator*=(double scale);

  friend PeriodicFunction operator+(PeriodicFunction a, const PeriodicFunction& b) { return a += b; }
  friend PeriodicFunction operator-(PeriodicFunction a, const PeriodicFunction& b) { return a -= b; }
  friend PeriodicFunction operator*(PeriodicFunction a, double s) { return a *= s; }
  friend PeriodicFunction operator*(double s, PeriodicFunction a) { return a *= s; }
  friend PeriodicFunction operator-(PeriodicFunction a) { return a *= -1.0; }
  friend PeriodicFunction operator*(const PeriodicFunction& a, const PeriodicFunction& b);

 private:
  std::vector<double> coeffs_;
};

/// Exact product; band limit is the sum of the operand band limits.
PeriodicFunction multiply(const PeriodicFunction& f, const PeriodicFunction& g);
PeriodicFunction derivative(const PeriodicFunction& f);
double integrate_circle(const PeriodicFunction& f);

/// sup-norm of f - g.
double distance(const PeriodicFunction& f, const PeriodicFunction& g);

}  // namespace circlops
