#pragma once

#include <Eigen/Dense>
#include <vector>

namespace circlops {

/// Spectral calculus for samples of X(t) with X(t+1) = hX(t).
///
/// With Z = log h (principal, complex), P(t) = exp(−tZ)X(t) is periodic and
/// is expanded in Fourier modes |k| ≤ K, where K is the last mode above
/// max(1e-15·peak, 10·noise floor) and the noise floor is the median mode
/// magnitude over [M/4, M/2). Derivatives follow from
/// X^{(m)} = Σ_i C(m,i) Zⁱ exp(tZ) P^{(m−i)}.
class QuasiPeriodicSeries {
 public:
  /// samples[j] = X(j/M), j = 0..M-1; h is square with rows = X.rows().
  QuasiPeriodicSeries(const std::vector<Eigen::MatrixXd>& samples, const Eigen::MatrixXd& h);

  int sample_count() const { return m_; }
  int mode_cutoff() const { return cutoff_; }

  /// X^{(order)} at the grid points.
  std::vector<Eigen::MatrixXd> derivative_samples(int order) const;
  /// X^{(order)}(t) for any real t.
  Eigen::MatrixXd evaluate(double t, int order = 0) const;

 private:
  Eigen::MatrixXcd periodic_derivative(double t, int order) const;

  int m_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  int cutoff_ = 0;
  Eigen::MatrixXcd log_;
  std::vector<Eigen::MatrixXcd> modes_;  // index k + cutoff_, k ∈ [−K, K]
};

}  // namespace circlops
