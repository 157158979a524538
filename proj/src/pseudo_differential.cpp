#include "circlops/pseudo_differential.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "circlops/error.hpp"

namespace circlops {

namespace {

// C(i, k) = i(i-1)…(i-k+1)/k!, valid for negative i.
double general_binomial(int i, int k) {
  double r = 1.0;
  for (int m = 0; m < k; ++m) r = r * (i - m) / (m + 1);
  return r;
}

}  // namespace

PseudoDifferentialSymbol PseudoDifferentialSymbol::from_operator(const DifferentialOperator& op) {
  PseudoDifferentialSymbol s;
  for (int i = 0; i <= op.order(); ++i)
    if (!op.coefficient(i).is_zero()) s.set(i, op.coefficient(i));
  return s;
}

PseudoDifferentialSymbol PseudoDifferentialSymbol::monomial(int order, PeriodicFunction f) {
  PseudoDifferentialSymbol s;
  s.set(order, std::move(f));
  return s;
}

const PeriodicFunction& PseudoDifferentialSymbol::coefficient(int order) const {
  static const PeriodicFunction zero;
  auto it = terms_.find(order);
  return it == terms_.end() ? zero : it->second;
}

int PseudoDifferentialSymbol::max_order() const {
  if (terms_.empty()) throw InvalidInput("PseudoDifferentialSymbol: empty symbol has no order");
  return terms_.rbegin()->first;
}

int PseudoDifferentialSymbol::min_order() const {
  if (terms_.empty()) throw InvalidInput("PseudoDifferentialSymbol: empty symbol has no order");
  return terms_.begin()->first;
}

int PseudoDifferentialSymbol::band_limit() const {
  int band = 0;
  for (const auto& [m, f] : terms_) band = std::max(band, f.band_limit());
  return band;
}

PseudoDifferentialSymbol PseudoDifferentialSymbol::truncated(int band) const {
  PseudoDifferentialSymbol s;
  for (const auto& [m, f] : terms_) s.set(m, f.truncated(band));
  return s;
}

PseudoDifferentialSymbol& PseudoDifferentialSymbol::operator+=(const PseudoDifferentialSymbol& other) {
  for (const auto& [m, f] : other.terms_) terms_[m] += f;
  return *this;
}

PseudoDifferentialSymbol& PseudoDifferentialSymbol::operator-=(const PseudoDifferentialSymbol& other) {
  for (const auto& [m, f] : other.terms_) terms_[m] -= f;
  return *this;
}

PseudoDifferentialSymbol& PseudoDifferentialSymbol::operator*=(double s) {
  for (auto& [m, f] : terms_) f *= s;
  return *this;
}

PseudoDifferentialSymbol pdo_multiply(const PseudoDifferentialSymbol& X, const PseudoDifferentialSymbol& Y, int floor) {
  PseudoDifferentialSymbol out;
  for (const auto& [i, a] : X.terms()) {
    if (a.is_zero()) continue;
    for (const auto& [j, b] : Y.terms()) {
      if (b.is_zero()) continue;
      int kmax = i + j - floor;
      if (i >= 0) kmax = std::min(kmax, i);
      PeriodicFunction db = b;
      for (int k = 0; k <= kmax; ++k) {
        if (k > 0) db = db.derivative();
        if (db.is_zero()) break;
        out.add(i + j - k, general_binomial(i, k) * (a * db));
      }
    }
  }
  return out;
}

DifferentialOperator plus_part(const PseudoDifferentialSymbol& X) {
  int top = 0;
  for (const auto& [m, f] : X.terms()) top = std::max(top, m);
  std::vector<PeriodicFunction> c(static_cast<std::size_t>(top + 1));
  for (const auto& [m, f] : X.terms())
    if (m >= 0) c[static_cast<std::size_t>(m)] = f;
  return DifferentialOperator::general(std::move(c));
}

PeriodicFunction residue(const PseudoDifferentialSymbol& X) { return X.coefficient(-1); }

double pairing(const PseudoDifferentialSymbol& X, const DifferentialOperator& op) {
  return integrate_circle(residue(pdo_multiply(X, PseudoDifferentialSymbol::from_operator(op), -1)));
}

double ell_eval(const AGDFunctional& ell, const DifferentialOperator& op) {
  const int n = op.order();
  if (!ell.symbol.empty() && n >= 1 && (ell.symbol.min_order() < -n || ell.symbol.max_order() > -1))
    throw InvalidInput("ell_eval: symbol orders must lie in [-" + std::to_string(n) + ", -1]");
  return pairing(ell.symbol, op);
}

HamiltonianField hamiltonian_field_report(const PseudoDifferentialSymbol& X, const DifferentialOperator& op,
                                          const HamiltonianOptions& options) {
  const int n = op.order();
  if (n < 1 || !op.is_monic()) throw InvalidInput("hamiltonian_field: operator must be monic of order >= 1");
  if (!X.empty() && (X.min_order() < -n || X.max_order() > -1))
    throw InvalidInput("hamiltonian_field: symbol orders must lie in [-" + std::to_string(n) + ", -1]");

  HamiltonianField out;
  const auto L = PseudoDifferentialSymbol::from_operator(op);

  // Dirac constraint on the D^{-n} coefficient.
  const auto commutator = pdo_multiply(L, X, -1) - pdo_multiply(X, L, -1);
  PseudoDifferentialSymbol Xn = X;
  Xn.add(-n, (-1.0 / n) * residue(commutator).antiderivative());
  out.normalized = Xn;

  const auto lw = op.weight_agnostic();
  const auto xl = plus_part(pdo_multiply(Xn, L, 0));
  const auto lx = plus_part(pdo_multiply(L, Xn, 0));
  const auto left = compose(lw, xl);
  const auto right = compose(lx, lw);
  const auto v = left - right;

  for (int i = std::max(0, n - 1); i <= v.order(); ++i) {
    out.contract_residual = std::max(out.contract_residual, v.coefficient(i).sup_norm());
    out.contract_scale = std::max({out.contract_scale, left.coefficient(i).sup_norm(), right.coefficient(i).sup_norm()});
  }
  if (out.contract_residual > options.contract_tolerance * std::max(1.0, out.contract_scale))
    throw ComputationFailure("hamiltonian_field: D^n / D^(n-1) coefficients do not vanish (residual " +
                             std::to_string(out.contract_residual) + " against scale " + std::to_string(out.contract_scale) + ")");

  std::vector<PeriodicFunction> c;
  for (int i = 0; i <= std::max(0, n - 2); ++i) c.push_back(n >= 2 ? v.coefficient(i) : PeriodicFunction{});
  out.field = DifferentialOperator::general(std::move(c));
  return out;
}

DifferentialOperator hamiltonian_field(const PseudoDifferentialSymbol& X, const DifferentialOperator& op,
                                       const HamiltonianOptions& options) {
  return hamiltonian_field_report(X, op, options).field;
}

double poisson_bracket(const AGDFunctional& X, const AGDFunctional& Y, const DifferentialOperator& op,
                       const HamiltonianOptions& options) {
  return pairing(Y.symbol, hamiltonian_field(X.symbol, op, options));
}

ClassMembership class_tangency_check(const PseudoDifferentialSymbol& X, const DifferentialOperator& op, GroupClass g,
                                     double tol) {
  const int n = op.order();
  require_parity(n, g);
  const auto shifted = DifferentialOperator::power(n) + hamiltonian_field(X, op);
  return is_in_class(shifted.with_weights(DensityWeights::standard(n)), g, tol);
}

}  // namespace circlops
