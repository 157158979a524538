#include "circlops/periodic_matrix.hpp"

#include <algorithm>

#include "circlops/error.hpp"

namespace circlops {

PeriodicMatrix PeriodicMatrix::identity(int n) {
  PeriodicMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = PeriodicFunction::constant(1.0);
  return m;
}

PeriodicMatrix PeriodicMatrix::constant(const Eigen::MatrixXd& c) {
  if (c.rows() != c.cols()) throw InvalidInput("PeriodicMatrix::constant: matrix is not square");
  const int n = static_cast<int>(c.rows());
  PeriodicMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = PeriodicFunction::constant(c(i, j));
  return m;
}

int PeriodicMatrix::band_limit() const {
  int band = 0;
  for (const auto& e : entries_) band = std::max(band, e.band_limit());
  return band;
}

Eigen::MatrixXd PeriodicMatrix::evaluate(double theta) const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j)(theta);
  return m;
}

std::vector<Eigen::MatrixXd> PeriodicMatrix::sample(int count) const {
  std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(count), Eigen::MatrixXd::Zero(n_, n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const auto values = (*this)(i, j).sample(count);
      for (int t = 0; t < count; ++t) out[static_cast<std::size_t>(t)](i, j) = values[static_cast<std::size_t>(t)];
    }
  return out;
}

PeriodicMatrix PeriodicMatrix::derivative() const {
  PeriodicMatrix m(n_);
  for (std::size_t k = 0; k < entries_.size(); ++k) m.entries_[k] = entries_[k].derivative();
  return m;
}

PeriodicMatrix PeriodicMatrix::transpose() const {
  PeriodicMatrix m(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

PeriodicMatrix PeriodicMatrix::truncated(int band) const {
  PeriodicMatrix m(n_);
  for (std::size_t k = 0; k < entries_.size(); ++k) m.entries_[k] = entries_[k].truncated(band);
  return m;
}

PeriodicFunction PeriodicMatrix::trace() const {
  PeriodicFunction t;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double PeriodicMatrix::sup_norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s = std::max(s, e.sup_norm());
  return s;
}

PeriodicMatrix& PeriodicMatrix::operator+=(const PeriodicMatrix& other) {
  if (other.n_ != n_) throw InvalidInput("PeriodicMatrix: size mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

PeriodicMatrix& PeriodicMatrix::operator-=(const PeriodicMatrix& other) {
  if (other.n_ != n_) throw InvalidInput("PeriodicMatrix: size mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

PeriodicMatrix& PeriodicMatrix::operator*=(double s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

PeriodicMatrix operator*(const PeriodicMatrix& a, const PeriodicMatrix& b) {
  if (a.n_ != b.n_) throw InvalidInput("PeriodicMatrix: size mismatch");
  PeriodicMatrix m(a.n_);
  for (int i = 0; i < a.n_; ++i)
    for (int j = 0; j < a.n_; ++j)
      for (int k = 0; k < a.n_; ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        m(i, j) += a(i, k) * b(k, j);
      }
  return m;
}

double distance(const PeriodicMatrix& a, const PeriodicMatrix& b) { return (a - b).sup_norm(); }

}  // namespace circlops
