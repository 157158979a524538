#include <doctest.h>

#include <cmath>
#include <map>

#include "circlops/error.hpp"
#include "circlops/pseudo_differential.hpp"
#include "circlops/random.hpp"

using namespace circlops;

namespace {

// Brute-force Leibniz expansion, independent of the library product:
// (f D^m)(g D^k) = Σ_j C(m, j) f g^{(j)} D^{m+k−j}, C the generalized binomial.
using Terms = std::map<int, PeriodicFunction>;

double binom(int m, int j) {
  double c = 1.0;
  for (int t = 0; t < j; ++t) c = c * (m - t) / (t + 1);
  return c;
}

Terms multiply_terms(const Terms& x, const Terms& y, int floor) {
  Terms out;
  for (const auto& [m, f] : x)
    for (const auto& [k, g] : y) {
      PeriodicFunction gj = g;
      for (int j = 0; m + k - j >= floor; ++j) {
        const double c = binom(m, j);
        if (c != 0.0) out[m + k - j] += c * (f * gj);
        gj = gj.derivative();
      }
    }
  return out;
}

Terms subtract(Terms a, const Terms& b) {
  for (const auto& [k, f] : b) a[k] -= f;
  return a;
}

Terms plus(const Terms& a) {
  Terms out;
  for (const auto& [k, f] : a)
    if (k >= 0) out[k] = f;
  return out;
}

Terms terms_of(const DifferentialOperator& op) {
  Terms out;
  for (int i = 0; i <= op.order(); ++i) out[i] = op.coefficient(i);
  return out;
}

Terms terms_of(const PseudoDifferentialSymbol& s) { return Terms(s.terms().begin(), s.terms().end()); }

// L(XL)₊ − (LX)₊L.
Terms brute_field(const Terms& x, const Terms& l) {
  return subtract(multiply_terms(l, plus(multiply_terms(x, l, 0)), 0), multiply_terms(plus(multiply_terms(l, x, 0)), l, 0));
}

DifferentialOperator random_monic(Rng& rng, int n, int band) {
  std::vector<PeriodicFunction> lower;
  for (int i = 0; i + 1 < n; ++i) lower.push_back(random_function(rng, band, 1.0));
  lower.emplace_back();
  return DifferentialOperator::monic(std::move(lower));
}

PseudoDifferentialSymbol random_negative(Rng& rng, int n, int band) {
  PseudoDifferentialSymbol s;
  for (int k = 1; k <= n; ++k) s.set(-k, random_function(rng, band, 1.0));
  return s;
}

}  // namespace

TEST_CASE("D⁻¹∘a = aD⁻¹ − a'D⁻² + a''D⁻³ + …") {
  const auto a = PeriodicFunction::cosine(2, 0.5);
  const auto p = pdo_multiply(PseudoDifferentialSymbol::monomial(-1, PeriodicFunction::constant(1.0)),
                              PseudoDifferentialSymbol::monomial(0, a), -3);
  CHECK(distance(p.coefficient(-1), a) < 1e-15);
  CHECK(distance(p.coefficient(-2), -a.derivative()) < 1e-12);
  CHECK(distance(p.coefficient(-3), a.derivative(2)) < 1e-10);
  CHECK(p.min_order() == -3);
}

TEST_CASE("pdo_multiply matches the brute-force expansion") {
  Rng rng(1);
  PseudoDifferentialSymbol x = random_negative(rng, 3, 3);
  x.set(1, random_function(rng, 3, 1.0));
  const auto y = PseudoDifferentialSymbol::from_operator(random_monic(rng, 3, 3));
  const auto lib = pdo_multiply(x, y, -4);
  const auto ref = multiply_terms(terms_of(x), terms_of(y), -4);
  for (const auto& [k, f] : ref) CHECK(distance(lib.coefficient(k), f) <= 1e-12 * std::max(1.0, f.sup_norm()));
  // Lowering the floor leaves every kept order unchanged.
  const auto deeper = pdo_multiply(x, y, -7);
  for (int k = -4; k <= lib.max_order(); ++k) CHECK(distance(deeper.coefficient(k), lib.coefficient(k)) == 0.0);
}

TEST_CASE("plus part and residue") {
  PseudoDifferentialSymbol s;
  s.set(2, PeriodicFunction::constant(1.0));
  s.set(0, PeriodicFunction::sine(1));
  s.set(-1, PeriodicFunction::cosine(3));
  s.set(-2, PeriodicFunction::constant(4.0));
  const auto p = plus_part(s);
  CHECK(p.order() == 2);
  CHECK(distance(p.coefficient(0), PeriodicFunction::sine(1)) == 0.0);
  CHECK(distance(residue(s), PeriodicFunction::cosine(3)) == 0.0);
  CHECK_FALSE(p.weights().has_value());
}

TEST_CASE("ℓ_X for X = fD⁻¹ on D² + u is ∫fu") {
  const auto f = PeriodicFunction::cosine(1) + PeriodicFunction::constant(0.3);
  const auto u = PeriodicFunction::cosine(1, 2.0) + PeriodicFunction::constant(-1.0);
  const auto L = DifferentialOperator::monic({u, PeriodicFunction{}});
  const AGDFunctional ell{PseudoDifferentialSymbol::monomial(-1, f)};
  CHECK(ell_eval(ell, L) == doctest::Approx(integrate_circle(f * u)).epsilon(1e-14));
  const AGDFunctional bad{PseudoDifferentialSymbol::monomial(-3, f)};
  CHECK_THROWS_AS(ell_eval(bad, L), InvalidInput);
}

TEST_CASE("n = 2 Hamiltonian field is −(f'''/2 + 2uf' + u'f)") {
  Rng rng(2);
  const auto f = random_function(rng, 4, 1.0);
  const auto u = random_function(rng, 4, 1.0);
  const auto V = hamiltonian_field(PseudoDifferentialSymbol::monomial(-1, f), DifferentialOperator::monic({u, PeriodicFunction{}}));
  const auto expected = -(0.5 * f.derivative(3) + 2.0 * (u * f.derivative()) + u.derivative() * f);
  CHECK(V.order() == 0);
  CHECK(distance(V.coefficient(0), expected) <= 1e-12 * expected.sup_norm());
}

TEST_CASE("Hamiltonian field matches a brute-force evaluation with the Dirac correction") {
  Rng rng(3);
  for (int n = 2; n <= 4; ++n) {
    const auto L = random_monic(rng, n, 2);
    const auto X = random_negative(rng, n, 2);
    const auto report = hamiltonian_field_report(X, L);
    const auto l = terms_of(L);

    // The correction δD^{−n} has nδ' = −(D^{n−1} coefficient of the raw field).
    const auto raw = brute_field(terms_of(X), l);
    const auto delta = report.normalized.coefficient(-n) - X.coefficient(-n);
    const double scale = std::max(1.0, raw.at(n - 1).sup_norm());
    CHECK(distance(double(n) * delta.derivative(), -raw.at(n - 1)) <= 1e-11 * scale);
    CHECK(std::abs(delta.mean()) < 1e-15);
    for (int k = -n + 1; k <= -1; ++k) CHECK(distance(report.normalized.coefficient(k), X.coefficient(k)) == 0.0);

    const auto fixed = brute_field(terms_of(report.normalized), l);
    double field_scale = 1.0;
    for (const auto& [k, g] : fixed) field_scale = std::max(field_scale, g.sup_norm());
    for (const auto& [k, g] : fixed) {
      if (k >= n - 1)
        CHECK(g.sup_norm() <= 1e-10 * field_scale);
      else
        CHECK(distance(report.field.coefficient(k), g) <= 1e-12 * field_scale);
    }
    // The correction is invisible to ℓ_X on the reduced space.
    CHECK(std::abs(pairing(report.normalized, L) - pairing(X, L)) < 1e-12);
  }
}

TEST_CASE("bracket is antisymmetric and vanishes on the diagonal") {
  Rng rng(4);
  for (int n = 2; n <= 3; ++n) {
    for (int i = 0; i < 10; ++i) {
      const auto L = random_monic(rng, n, 8);
      const AGDFunctional X{random_negative(rng, n, 8)};
      const AGDFunctional Y{random_negative(rng, n, 8)};
      const double xy = poisson_bracket(X, Y, L);
      const double yx = poisson_bracket(Y, X, L);
      CHECK(std::abs(xy + yx) <= 1e-9);
      CHECK(std::abs(poisson_bracket(X, X, L)) <= 1e-9);
    }
  }
}

TEST_CASE("bracket is linear in X") {
  Rng rng(5);
  const auto L = random_monic(rng, 3, 4);
  const auto X1 = random_negative(rng, 3, 4);
  const auto X2 = random_negative(rng, 3, 4);
  const AGDFunctional Y{random_negative(rng, 3, 4)};
  const double lhs = poisson_bracket(AGDFunctional{X1 + 2.0 * X2}, Y, L);
  const double rhs = poisson_bracket(AGDFunctional{X1}, Y, L) + 2.0 * poisson_bracket(AGDFunctional{X2}, Y, L);
  CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("class tangency examples") {
  Rng rng(7);
  // V_X(L) has order ≤ n − 2, so Dⁿ + V_X(L) stays in the special class.
  CHECK(class_tangency_check(random_negative(rng, 3, 4), random_monic(rng, 3, 4), GroupClass::PSL).member);
  // For n = 2 the field is a potential, so D² + V is self-adjoint.
  CHECK(class_tangency_check(random_negative(rng, 2, 4), random_monic(rng, 2, 4), GroupClass::PSp).member);
  CHECK_THROWS_AS(class_tangency_check(random_negative(rng, 2, 4), random_monic(rng, 2, 4), GroupClass::PSO), InvalidInput);
}

TEST_CASE("Hamiltonian field rejects symbols outside [−n, −1]") {
  Rng rng(8);
  const auto L = random_monic(rng, 2, 2);
  CHECK_THROWS_AS(hamiltonian_field(PseudoDifferentialSymbol::monomial(0, PeriodicFunction::constant(1.0)), L), InvalidInput);
  CHECK_THROWS_AS(hamiltonian_field(PseudoDifferentialSymbol::monomial(-3, PeriodicFunction::constant(1.0)), L), InvalidInput);
}
