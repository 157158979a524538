#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "circlops/circle_diffeo.hpp"
#include "circlops/periodic_function.hpp"

namespace circlops {

/// Density weights r_in → r_out of an operator |Ω|^{r_in} → |Ω|^{r_out}.
struct DensityWeights {
  double in = 0.0;
  double out = 0.0;

  /// The (1-n)/2 → (1+n)/2 scheme: scalar principal symbol, L and L* on the same bundles.
  static DensityWeights standard(int order) { return {(1.0 - order) / 2.0, (1.0 + order) / 2.0}; }
};

/// L = Σ_{i=0}^{n} a_i(θ) Dⁱ, functions on the left.
///
/// Weights are metadata. Operators built with `monic` carry the standard
/// weights; `general` operators are weight-agnostic and adapt to whatever
/// they are composed with.
class DifferentialOperator {
 public:
  DifferentialOperator() : coeffs_(1) {}

  /// Dⁿ + lower[n-1] D^{n-1} + … + lower[0]; n = lower.size(). Standard weights.
  static DifferentialOperator monic(std::vector<PeriodicFunction> lower);
  /// Σ all[i] Dⁱ, weight-agnostic.
  static DifferentialOperator general(std::vector<PeriodicFunction> all);
  /// Dⁿ, weight-agnostic.
  static DifferentialOperator power(int n);
  static DifferentialOperator multiplication(PeriodicFunction a) { return general({std::move(a)}); }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const PeriodicFunction> coefficients() const { return coeffs_; }
  /// a_i, or the zero function when i > order().
  const PeriodicFunction& coefficient(int i) const;
  const std::optional<DensityWeights>& weights() const { return weights_; }

  /// Leading coefficient is exactly the constant 1.
  bool is_monic() const;
  int band_limit() const;

  DifferentialOperator with_weights(std::optional<DensityWeights> w) const;
  DifferentialOperator weight_agnostic() const { return with_weights(std::nullopt); }
  DifferentialOperator truncated(int band) const;
  /// Drops leading coefficients whose sup-norm is ≤ tol (keeps order ≥ 0).
  DifferentialOperator trimmed(double tol = 0.0) const;

  PeriodicFunction apply(const PeriodicFunction& u) const;

  DifferentialOperator& operator+=(const DifferentialOperator& other);
  DifferentialOperator& operator-=(const DifferentialOperator& other);
  DifferentialOperator& operator*=(double s);
  friend DifferentialOperator operator+(DifferentialOperator a, const DifferentialOperator& b) { return a += b; }
  friend DifferentialOperator operator-(DifferentialOperator a, const DifferentialOperator& b) { return a -= b; }
  friend DifferentialOperator operator*(double s, DifferentialOperator a) { return a *= s; }

 private:
  std::vector<PeriodicFunction> coeffs_;
  std::optional<DensityWeights> weights_;
};

/// Leibniz composition (a Dⁱ)∘(b Dʲ) = Σ_k C(i,k) a b^{(k)} D^{i+j-k}.
/// Rejects operators whose density weights do not chain.
DifferentialOperator compose(const DifferentialOperator& outer, const DifferentialOperator& inner);

/// L* u = Σ (-1)ⁱ Dⁱ(a_i u).
DifferentialOperator formal_adjoint(const DifferentialOperator& op);

/// σ^sub(L) = coefficient of D^{n-1} in (L − (−1)ⁿ L*)/2. Requires a monic operator.
PeriodicFunction subprincipal_symbol(const DifferentialOperator& op);

/// Max over i of sup |a_i − b_i|.
double coefficient_distance(const DifferentialOperator& a, const DifferentialOperator& b);

enum class GroupClass { PSL, PSp, PSO };

std::string_view to_string(GroupClass g);
std::optional<GroupClass> parse_group_class(std::string_view name);
/// Throws InvalidInput when the parity of n does not fit the class.
void require_parity(int n, GroupClass g);

struct ClassMembership {
  bool member = false;
  double residual = 0.0;
};

inline constexpr double kMembershipTolerance = 1e-10;

/// PSL: ‖σ^sub‖∞; PSp (n even): ‖L − L*‖; PSO (n odd): ‖L + L*‖.
ClassMembership is_in_class(const DifferentialOperator& op, GroupClass g, double tol = kMembershipTolerance);

/// F^* ∘ L ∘ (F^*)⁻¹ at weights (1−n)/2 → (1+n)/2, i.e. the action of F⁻¹.
/// Coefficients are read off by probing with n+1 pulled-back trigonometric
/// functions and solving the resulting jet systems pointwise on a grid of
/// 8·band points.
DifferentialOperator pullback_conjugate(const CircleDiffeo& F, const DifferentialOperator& op, int band = 64);

/// F·L = F_* ∘ L ∘ F^*.
DifferentialOperator diffeo_act(const CircleDiffeo& F, const DifferentialOperator& op, int band = 64);

}  // namespace circlops
