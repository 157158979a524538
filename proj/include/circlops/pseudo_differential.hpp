#pragma once

#include <map>

#include "circlops/differential_operator.hpp"
#include "circlops/periodic_function.hpp"

namespace circlops {

/// Finite Laurent sum Σ_m p_m(θ) D^m, m ∈ ℤ, functions on the left.
class PseudoDifferentialSymbol {
 public:
  PseudoDifferentialSymbol() = default;
  static PseudoDifferentialSymbol from_operator(const DifferentialOperator& op);
  /// f·D^order.
  static PseudoDifferentialSymbol monomial(int order, PeriodicFunction f);

  const std::map<int, PeriodicFunction>& terms() const { return terms_; }
  /// p_m, or zero.
  const PeriodicFunction& coefficient(int order) const;
  void set(int order, PeriodicFunction f) { terms_[order] = std::move(f); }
  void add(int order, const PeriodicFunction& f) { terms_[order] += f; }

  bool empty() const { return terms_.empty(); }
  int max_order() const;
  int min_order() const;
  int band_limit() const;
  PseudoDifferentialSymbol truncated(int band) const;

  PseudoDifferentialSymbol& operator+=(const PseudoDifferentialSymbol& other);
  PseudoDifferentialSymbol& operator-=(const PseudoDifferentialSymbol& other);
  PseudoDifferentialSymbol& operator*=(double s);
  friend PseudoDifferentialSymbol operator+(PseudoDifferentialSymbol a, const PseudoDifferentialSymbol& b) { return a += b; }
  friend PseudoDifferentialSymbol operator-(PseudoDifferentialSymbol a, const PseudoDifferentialSymbol& b) { return a -= b; }
  friend PseudoDifferentialSymbol operator*(double s, PseudoDifferentialSymbol a) { return a *= s; }

 private:
  std::map<int, PeriodicFunction> terms_;
};

/// X∘Y with every coefficient of order ≥ floor exact; the Leibniz tail below floor is dropped.
PseudoDifferentialSymbol pdo_multiply(const PseudoDifferentialSymbol& X, const PseudoDifferentialSymbol& Y, int floor);

/// Nonnegative-order part as a weight-agnostic operator.
DifferentialOperator plus_part(const PseudoDifferentialSymbol& X);

/// Coefficient of D⁻¹.
PeriodicFunction residue(const PseudoDifferentialSymbol& X);

/// ℓ_X(L) = ∫ res(X∘L).
struct AGDFunctional {
  PseudoDifferentialSymbol symbol;
};

/// Rejects symbols with orders outside [−n, −1] for n = order(L) ≥ 1.
double ell_eval(const AGDFunctional& ell, const DifferentialOperator& op);
/// ∫ res(X∘L) for any X and L, with no order restrictions.
double pairing(const PseudoDifferentialSymbol& X, const DifferentialOperator& op);

struct HamiltonianOptions {
  double contract_tolerance = 1e-10;
};

struct HamiltonianField {
  DifferentialOperator field;  // order ≤ n−2
  double contract_residual = 0.0;  // sup of the Dⁿ, D^{n−1} coefficients before they are dropped
  double contract_scale = 0.0;     // sup of the two cancelling products in those orders
  PseudoDifferentialSymbol normalized;  // X with its D^{-n} coefficient adjusted
};

/// V_X(L) = L(XL)₊ − (LX)₊L for monic L of order n and X with orders in [−n, −1].
///
/// The D^{n−1} coefficient of that expression is the total derivative
/// res[L, X]. Adding δD^{−n} to X with nδ' = −res[L, X] cancels it while
/// leaving ℓ_X unchanged on 𝓡ₙ; after that the Dⁿ and D^{n−1}
/// coefficients must vanish to `contract_tolerance`·max(1, contract_scale),
/// otherwise ComputationFailure is thrown.
HamiltonianField hamiltonian_field_report(const PseudoDifferentialSymbol& X, const DifferentialOperator& op,
                                          const HamiltonianOptions& options = {});
DifferentialOperator hamiltonian_field(const PseudoDifferentialSymbol& X, const DifferentialOperator& op,
                                       const HamiltonianOptions& options = {});

/// {ℓ_X, ℓ_Y}(L) = ℓ_Y(V_X(L)).
double poisson_bracket(const AGDFunctional& X, const AGDFunctional& Y, const DifferentialOperator& op,
                       const HamiltonianOptions& options = {});

/// is_in_class(Dⁿ + V_X(L), G).
ClassMembership class_tangency_check(const PseudoDifferentialSymbol& X, const DifferentialOperator& op, GroupClass g,
                                     double tol = kMembershipTolerance);

}  // namespace circlops
