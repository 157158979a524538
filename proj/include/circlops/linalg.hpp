#pragma once

#include <Eigen/Dense>
#include <vector>

namespace circlops {

/// Φ' = CΦ (left) or R' = RC (right).
enum class FlowSide { Left, Right };

/// Fixed-step RK4 for a linear system with periodic coefficient samples
/// C(j/S), j = 0..S-1. `steps` must divide S/2; returns steps+1 frames
/// starting from the identity.
std::vector<Eigen::MatrixXd> rk4_flow(const std::vector<Eigen::MatrixXd>& coefficient_samples, int steps, FlowSide side);

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& m);

/// Max over matched pairs of |λ−μ|/max(1,|λ|), minimized over all pairings.
double spectrum_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// det(m)·m^{-T}; entries are signed minors, so it is defined for singular m.
Eigen::MatrixXd cofactor_matrix(const Eigen::MatrixXd& m);

/// Principal complex logarithm.
Eigen::MatrixXcd matrix_log(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& m);

/// min over sign of ‖â ∓ b̂‖ for unit vectors â, b̂: distance in ℝPⁿ⁻¹.
double projective_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Determinant of `m` with row `skip` removed (m has one more row than columns).
double minor_without_row(const Eigen::MatrixXd& m, int skip);

}  // namespace circlops
