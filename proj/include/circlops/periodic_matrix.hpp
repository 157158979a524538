#pragma once

#include <Eigen/Dense>
#include <vector>

#include "circlops/periodic_function.hpp"

namespace circlops {

/// n×n matrix of PeriodicFunction entries, row-major.
class PeriodicMatrix {
 public:
  PeriodicMatrix() = default;
  explicit PeriodicMatrix(int n) : n_(n), entries_(static_cast<std::size_t>(n * n)) {}

  static PeriodicMatrix identity(int n);
  static PeriodicMatrix constant(const Eigen::MatrixXd& m);

  int size() const { return n_; }
  PeriodicFunction& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * n_ + j)]; }
  const PeriodicFunction& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * n_ + j)]; }

  int band_limit() const;
  Eigen::MatrixXd evaluate(double theta) const;
  /// Values at θ_j = j/count.
  std::vector<Eigen::MatrixXd> sample(int count) const;

  PeriodicMatrix derivative() const;
  PeriodicMatrix transpose() const;
  PeriodicMatrix truncated(int band) const;
  PeriodicFunction trace() const;
  /// Max over entries of sup |entry|.
  double sup_norm() const;

  PeriodicMatrix& operator+=(const PeriodicMatrix& other);
  PeriodicMatrix& operator-=(const PeriodicMatrix& other);
  PeriodicMatrix& operator*=(double s);
  friend PeriodicMatrix operator+(PeriodicMatrix a, const PeriodicMatrix& b) { return a += b; }
  friend PeriodicMatrix operator-(PeriodicMatrix a, const PeriodicMatrix& b) { return a -= b; }
  friend PeriodicMatrix operator*(double s, PeriodicMatrix a) { return a *= s; }
  /// Exact entrywise convolution products.
  friend PeriodicMatrix operator*(const PeriodicMatrix& a, const PeriodicMatrix& b);

 private:
  int n_ = 0;
  std::vector<PeriodicFunction> entries_;
};

double distance(const PeriodicMatrix& a, const PeriodicMatrix& b);

}  // namespace circlops
