#pragma once

#include <Eigen/Dense>
#include <vector>

#include "circlops/differential_operator.hpp"
#include "circlops/periodic_matrix.hpp"

namespace circlops {

inline constexpr int kDefaultSteps = 4096;
inline constexpr double kIntegrationFlag = 1e-6;

/// Jet frames Φ(t_j), t_j = j/M, j = 0..M; column a holds (u_a, u_a', …, u_a^{(n-1)}).
struct FundamentalSolution {
  int n = 0;
  int steps = 0;
  std::vector<Eigen::MatrixXd> frames;
  /// ‖Φ_M(1) − Φ_{M/2}(1)‖/15, the Richardson estimate for RK4.
  double error_estimate = 0.0;
  bool flagged = false;  // error_estimate > kIntegrationFlag

  double time(int j) const { return static_cast<double>(j) / steps; }
  const Eigen::MatrixXd& end() const { return frames.back(); }
};

/// Superdiagonal ones, last row (−a₀, …, −a_{n−1}); Φ' = CΦ for monic L.
PeriodicMatrix jet_system(const DifferentialOperator& op);

/// Requires M a power of two ≥ 256 and L monic.
FundamentalSolution integrate_fundamental(const DifferentialOperator& op, int steps = kDefaultSteps);

Eigen::MatrixXd monodromy(const FundamentalSolution& phi);
Eigen::MatrixXd monodromy(const DifferentialOperator& op, int steps = kDefaultSteps);

/// det Φ(t_j), j = 0..M.
std::vector<double> wronskian(const FundamentalSolution& phi);

/// max_j |W' + a_{n−1}W| (Abel's identity for monic L). W' is taken
/// spectrally from log|W| = κt + periodic.
double liouville_residual(const DifferentialOperator& op, const FundamentalSolution& phi);

/// ‖Φ_{2M}(1) − Φ_M(1)‖ / ‖Φ_{4M}(1) − Φ_{2M}(1)‖ for base M; ≈16 for RK4.
double step_halving_ratio(const DifferentialOperator& op, int base_steps = 256);

/// Matrix of the Lagrange concomitant B[u, v] = Σ_{p,q} u^{(p)} B_{pq} v^{(q)},
/// B[u,v] = Σ_i Σ_{k<i} (−1)^k u^{(i−1−k)} (a_i v)^{(k)}.
PeriodicMatrix concomitant_field(const DifferentialOperator& op);

enum class FormKind { Antisymmetric, Symmetric };

struct ConcomitantForm {
  int n = 0;
  Eigen::MatrixXd matrix;  // B(0)
  FormKind kind = FormKind::Antisymmetric;
  /// ‖B ∓ Bᵀ‖ for the expected symmetry.
  double symmetry_residual = 0.0;
};

/// Rejects L that is neither self- nor skew-adjoint within `tol`.
ConcomitantForm concomitant(const DifferentialOperator& op, double tol = 1e-8);

/// max_j ‖Φᵀ(t_j) B(t_j) Φ(t_j) − B(0)‖_F.
double concomitant_drift(const DifferentialOperator& op, const FundamentalSolution& phi);

struct GroupCertificate {
  GroupClass group = GroupClass::PSL;
  double det_residual = 0.0;   // |det M − 1|
  double form_residual = 0.0;  // ‖MᵀBM − B‖_F, PSp and PSO
  double residual = 0.0;       // the max of the applicable residuals
  bool pass = false;
};

/// Rejects operators outside 𝓡ₙ^G (membership tolerance `membership_tol`).
GroupCertificate certify_group(const DifferentialOperator& op, GroupClass g, int steps = kDefaultSteps,
                               double tol = 1e-6, double membership_tol = kMembershipTolerance);

}  // namespace circlops
