#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "circlops/circle_diffeo.hpp"
#include "circlops/differential_operator.hpp"
#include "circlops/monodromy.hpp"

namespace circlops {

/// Closed-form derivatives of a lift: rows Γ^{(k)}(t)/k!, k = 0..order, at any real t.
class CurveJetSource {
 public:
  virtual ~CurveJetSource() = default;
  virtual Eigen::MatrixXd taylor(double t, int order) const = 0;
};

/// Lift Γ(t_j), t_j = j/M, j = 0..M, of a curve in ℝPⁿ⁻¹ with Γ(t+1) = hΓ(t).
/// Curves built from an operator carry `jets` (the generating ODE, propagated
/// through duality and the group and diffeomorphism actions); detached curves
/// leave it null and are differentiated spectrally by QuasiPeriodicSeries.
struct ProjectiveCurve {
  int n = 0;
  std::vector<Eigen::VectorXd> lift;
  Eigen::MatrixXd monodromy;
  std::shared_ptr<const CurveJetSource> jets;

  bool detached() const { return jets == nullptr; }

  int steps() const { return static_cast<int>(lift.size()) - 1; }
  /// ‖Γ(1) − hΓ(0)‖.
  double quasi_periodicity_residual() const;
};

inline constexpr double kQuasiPeriodicTolerance = 1e-8;

/// Detached curve; validates shapes and ‖Γ(1) − hΓ(0)‖ ≤ tol relative to max(1, ‖Γ(1)‖).
ProjectiveCurve make_curve(std::vector<Eigen::VectorXd> lift, Eigen::MatrixXd h, double tol = kQuasiPeriodicTolerance);

/// Γ = first row of the fundamental jet frame; h = Φ(1)ᵀ. Higher derivatives
/// of Γ follow from the ODE and the exact derivatives of its coefficients.
ProjectiveCurve curve_of_operator(const DifferentialOperator& op, int steps = kDefaultSteps);
/// Detached: frames only.
ProjectiveCurve curve_of_solution(const FundamentalSolution& phi);
/// Copy without its jet source.
ProjectiveCurve detach(ProjectiveCurve curve);

/// Rows Γ, Γ', …, Γ^{(order)} at each grid point j = 0..M-1.
std::vector<Eigen::MatrixXd> curve_jets(const ProjectiveCurve& curve, int order);

/// Monic operator whose solution space is spanned by the lift components.
/// The lift is first rescaled by |W|^{−1/n}, then the coefficients come from
/// the cofactor expansion of W[u, u₁, …, uₙ]; a_{n−1} ≡ 0. With a jet source
/// the rescaling is done in Taylor arithmetic per grid point; detached curves
/// project log|W| with an adaptive noise cutoff and differentiate spectrally.
/// Coefficients are projected to `band`. Throws DegenerateCurve if the
/// Wronskian vanishes or changes sign.
DifferentialOperator operator_of_curve(const ProjectiveCurve& curve, int band = kDefaultBand);

/// Recomputes h from the jet frames J(t) = (Γ, Γ', …, Γ^{(n−1)}) at t = 0 and 1:
/// J(1) = J(0)hᵀ. Requires a jet source (Unsupported for detached curves).
Eigen::MatrixXd frame_monodromy(const ProjectiveCurve& curve);

/// Cofactor vector of Γ, …, Γ^{(n−2)}; monodromy det(h)h^{−T}.
ProjectiveCurve dual_curve(const ProjectiveCurve& curve);

/// max_j of the ℝPⁿ⁻¹ distance between samples; requires equal grids.
double projective_distance(const ProjectiveCurve& a, const ProjectiveCurve& b);

/// max_j distance between γ*(t_j) and B⁻¹γ(t_j) in ℝPⁿ⁻¹.
double self_duality_residual(const ProjectiveCurve& curve, const Eigen::MatrixXd& form);

struct WindingLift {
  Eigen::MatrixXd monodromy;
  int winding = 0;     // signed number of half-turns
  double angle = 0.0;  // accumulated angle of Γ over [0, 1]
};

/// n = 2 only; other n throw Unsupported.
WindingLift winding_lift_n2(const ProjectiveCurve& curve);

/// g·γ: samples gΓ, monodromy ghg⁻¹.
ProjectiveCurve act_group(const Eigen::MatrixXd& g, const ProjectiveCurve& curve);
/// F·γ = γ∘F⁻¹ sampled on the same grid; monodromy unchanged.
ProjectiveCurve act_diffeo(const CircleDiffeo& F, const ProjectiveCurve& curve);

}  // namespace circlops
