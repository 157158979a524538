#pragma once

#include <Eigen/Dense>
#include <vector>

#include "circlops/differential_operator.hpp"
#include "circlops/monodromy.hpp"
#include "circlops/periodic_matrix.hpp"
#include "circlops/random.hpp"

namespace circlops {

// Row convention throughout: horizontal rows satisfy r' = rA, paths β' = βA
// with β(t+1) = hβ(t), and gauges act by β ↦ βg⁻¹.

inline constexpr double kStructureTolerance = 1e-12;

/// sl(n)-valued periodic connection; the constructor rejects sup|tr A| > tol.
class MatrixConnection {
 public:
  explicit MatrixConnection(PeriodicMatrix entries, double trace_tol = kStructureTolerance);

  int n() const { return entries_.size(); }
  const PeriodicMatrix& entries() const { return entries_; }
  const PeriodicFunction& operator()(int i, int j) const { return entries_(i, j); }
  double trace_residual() const { return trace_residual_; }

 private:
  PeriodicMatrix entries_;
  double trace_residual_ = 0.0;
};

/// Upper-triangular unipotent loop: ones on the diagonal, zeros below.
class UnipotentGauge {
 public:
  explicit UnipotentGauge(PeriodicMatrix entries, double tol = kStructureTolerance);
  static UnipotentGauge identity(int n) { return UnipotentGauge(PeriodicMatrix::identity(n)); }

  int n() const { return entries_.size(); }
  const PeriodicMatrix& entries() const { return entries_; }
  /// Exact: g⁻¹ = Σ_{k<n} (I − g)^k.
  UnipotentGauge inverse() const;
  friend UnipotentGauge operator*(const UnipotentGauge& a, const UnipotentGauge& b);

 private:
  PeriodicMatrix entries_;
};

/// A ∈ Ψ⁻¹(Λ): subdiagonal ≡ 1 and zeros strictly below it.
class LevelSetElement {
 public:
  explicit LevelSetElement(MatrixConnection a, double tol = kStructureTolerance);

  int n() const { return connection_.n(); }
  const MatrixConnection& connection() const { return connection_; }

 private:
  MatrixConnection connection_;
};

/// Strictly lower-triangular part.
PeriodicMatrix psi_project(const MatrixConnection& a);
/// The subdiagonal shift Λ.
PeriodicMatrix lambda_shift(int n);

/// gAg⁻¹ − g'g⁻¹, with exact band growth.
MatrixConnection gauge_act(const UnipotentGauge& g, const MatrixConnection& a);
LevelSetElement gauge_act(const UnipotentGauge& g, const LevelSetElement& a);

struct Reduction {
  DifferentialOperator op;  // monic; a_{n−1} = −tr A up to rounding
  UnipotentGauge gauge;     // gauge_act(gauge, A) = embed_iota(op)
};

/// Successive elimination r_{j+1} = r_j' − Σ_{i≤j} A_{ij} r_i from the cyclic
/// component r_0 = u; the last column yields L u = 0. The gauge is the matrix
/// of the elimination polynomials, g_{kj} = [D^k] P_j.
Reduction ds_reduce_with_gauge(const LevelSetElement& a);
DifferentialOperator ds_reduce(const LevelSetElement& a);

/// Companion with subdiagonal ones and last column (−a₀, …, −a_{n−1}); the
/// transpose of jet_system(L). Rejects non-monic L and |a_{n−1}| > tol.
LevelSetElement embed_iota(const DifferentialOperator& op, double tol = kMembershipTolerance);

/// R(1) for R' = RA, R(0) = I.
Eigen::MatrixXd holonomy(const MatrixConnection& a, int steps = kDefaultSteps);

/// β(t_j), j = 0..M, with β(t+1) = hβ(t).
struct QuasiPeriodicPath {
  std::vector<Eigen::MatrixXd> frames;
  Eigen::MatrixXd monodromy;

  int steps() const { return static_cast<int>(frames.size()) - 1; }
  double quasi_periodicity_residual() const;
};

inline constexpr double kPathTolerance = 1e-8;

/// Validates ‖β(1) − hβ(0)‖ ≤ tol·max(1, ‖β(1)‖).
QuasiPeriodicPath make_path(std::vector<Eigen::MatrixXd> frames, Eigen::MatrixXd h, double tol = kPathTolerance);
/// β' = βA with β(0) = frame0; h = β(1)β(0)⁻¹.
QuasiPeriodicPath path_of_connection(const MatrixConnection& a, const Eigen::MatrixXd& frame0, int steps = kDefaultSteps);
/// β⁻¹β' (β' spectral), projected to `band`; the trace, which is rounding
/// error for an SL path, is removed.
MatrixConnection connection_of_path(const QuasiPeriodicPath& path, int band = kDefaultBand);
/// h = β(1)β(0)⁻¹.
Eigen::MatrixXd monodromy_of_path(const QuasiPeriodicPath& path);

/// Level-set element with random upper-triangular part (traceless diagonal).
LevelSetElement random_level_set(Rng& rng, int n, int band, double amplitude);
/// Random periodic unipotent gauge.
UnipotentGauge random_gauge(Rng& rng, int n, int band, double amplitude);

}  // namespace circlops
