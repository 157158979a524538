#include "circlops/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <limits>
#include <numeric>

#include "circlops/error.hpp"

namespace circlops {

std::vector<Eigen::MatrixXd> rk4_flow(const std::vector<Eigen::MatrixXd>& coefficient_samples, int steps, FlowSide side) {
  const auto count = static_cast<int>(coefficient_samples.size());
  if (steps <= 0 || count % (2 * steps) != 0) throw InvalidInput("rk4_flow: step count must divide half the sample count");
  const int stride = count / (2 * steps);
  const int n = static_cast<int>(coefficient_samples.front().rows());
  const double h = 1.0 / steps;
  auto sample = [&](int half_index) -> const Eigen::MatrixXd& {
    return coefficient_samples[static_cast<std::size_t>((half_index * stride) % count)];
  };
  auto rhs = [&](const Eigen::MatrixXd& c, const Eigen::MatrixXd& y) -> Eigen::MatrixXd {
    return side == FlowSide::Left ? Eigen::MatrixXd(c * y) : Eigen::MatrixXd(y * c);
  };
  std::vector<Eigen::MatrixXd> frames;
  frames.reserve(static_cast<std::size_t>(steps + 1));
  frames.push_back(Eigen::MatrixXd::Identity(n, n));
  for (int s = 0; s < steps; ++s) {
    const Eigen::MatrixXd& y = frames.back();
    const auto& c0 = sample(2 * s);
    const auto& c1 = sample(2 * s + 1);
    const auto& c2 = sample(2 * s + 2);
    const Eigen::MatrixXd k1 = rhs(c0, y);
    const Eigen::MatrixXd k2 = rhs(c1, y + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = rhs(c1, y + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = rhs(c2, y + h * k3);
    frames.push_back(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  }
  return frames;
}

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& m) { return Eigen::EigenSolver<Eigen::MatrixXd>(m, false).eigenvalues(); }

double spectrum_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) throw InvalidInput("spectrum_distance: size mismatch");
  std::vector<int> perm(static_cast<std::size_t>(a.size()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int i = 0; i < a.size(); ++i) {
      const auto mu = b(perm[static_cast<std::size_t>(i)]);
      worst = std::max(worst, std::abs(a(i) - mu) / std::max(1.0, std::abs(a(i))));
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Eigen::MatrixXd cofactor_matrix(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd c(n, n);
  if (n == 1) {
    c(0, 0) = 1.0;
    return c;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXd minor(n - 1, n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int s = 0, ss = 0; s < n; ++s) {
          if (s == j) continue;
          minor(rr, ss++) = m(r, s);
        }
        ++rr;
      }
      c(i, j) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * minor.determinant();
    }
  return c;
}

Eigen::MatrixXcd matrix_log(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXcd z = m.cast<std::complex<double>>();
  return z.log();
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& m) { return m.exp(); }

double projective_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ua = a.normalized();
  const Eigen::VectorXd ub = b.normalized();
  return std::min((ua - ub).norm(), (ua + ub).norm());
}

double minor_without_row(const Eigen::MatrixXd& m, int skip) {
  const int rows = static_cast<int>(m.rows());
  Eigen::MatrixXd sub(rows - 1, m.cols());
  for (int r = 0, rr = 0; r < rows; ++r)
    if (r != skip) sub.row(rr++) = m.row(r);
  return sub.determinant();
}

}  // namespace circlops
