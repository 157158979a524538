#include <doctest.h>

#include <cmath>
#include <numbers>

#include "circlops/error.hpp"
#include "circlops/linalg.hpp"
#include "circlops/monodromy.hpp"
#include "circlops/random.hpp"

using namespace circlops;

namespace {

constexpr double kW = 2 * std::numbers::pi;

DifferentialOperator hill(const PeriodicFunction& q) { return DifferentialOperator::monic({q, PeriodicFunction{}}); }

DifferentialOperator d3_minus_d() {
  return DifferentialOperator::monic({PeriodicFunction{}, PeriodicFunction::constant(-1.0), PeriodicFunction{}});
}

Eigen::MatrixXd mat(int rows, int cols, std::initializer_list<double> v) {
  Eigen::MatrixXd m(rows, cols);
  auto it = v.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

}  // namespace

TEST_CASE("jet system is the companion with superdiagonal ones") {
  const auto a0 = PeriodicFunction::cosine(1);
  const auto a1 = PeriodicFunction::sine(2);
  const auto C = jet_system(DifferentialOperator::monic({a0, a1, PeriodicFunction{}}));
  REQUIRE(C.size() == 3);
  CHECK(distance(C(0, 1), PeriodicFunction::constant(1.0)) == 0.0);
  CHECK(distance(C(1, 2), PeriodicFunction::constant(1.0)) == 0.0);
  CHECK(distance(C(2, 0), -a0) == 0.0);
  CHECK(distance(C(2, 1), -a1) == 0.0);
  CHECK(C(0, 0).is_zero());
  CHECK(C(2, 2).is_zero());
}

TEST_CASE("Hill witnesses") {
  CHECK((monodromy(hill(PeriodicFunction{})) - mat(2, 2, {1, 1, 0, 1})).norm() < 1e-12);
  CHECK((monodromy(hill(PeriodicFunction::constant(kW * kW))) - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-8);
  CHECK((monodromy(hill(PeriodicFunction::constant(kW * kW / 4))) + Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-8);
  // D² + ω²: Φ(1) = [[cos ω, sin ω/ω], [−ω sin ω, cos ω]].
  const double w = 1.3;
  CHECK((monodromy(hill(PeriodicFunction::constant(w * w))) - mat(2, 2, {std::cos(w), std::sin(w) / w, -w * std::sin(w), std::cos(w)})).norm() < 1e-12);
}

TEST_CASE("D³ − D has monodromy spectrum {e, 1, 1/e}") {
  Eigen::VectorXcd expected(3);
  expected << std::exp(1.0), 1.0, std::exp(-1.0);
  CHECK(spectrum_distance(eigenvalues(monodromy(d3_minus_d())), expected) < 1e-8);
}

TEST_CASE("Wronskian is 1 without subprincipal part and e^{−ct} for D² + cD") {
  Rng rng(1);
  const auto L = hill(random_function(rng, 4, 1.0));
  const auto phi = integrate_fundamental(L, 1024);
  for (double w : wronskian(phi)) CHECK(std::abs(w - 1.0) < 1e-10);
  CHECK(std::abs(monodromy(phi).determinant() - 1.0) < 1e-10);
  CHECK_FALSE(phi.flagged);

  const double c = 0.7;
  const auto damped = DifferentialOperator::monic({PeriodicFunction::cosine(1), PeriodicFunction::constant(c)});
  const auto psi = integrate_fundamental(damped, 1024);
  const auto w = wronskian(psi);
  for (int j = 0; j <= psi.steps; j += 128) CHECK(std::abs(w[static_cast<std::size_t>(j)] - std::exp(-c * psi.time(j))) < 1e-10);
  CHECK(liouville_residual(damped, psi) < 1e-8);
}

TEST_CASE("RK4 halving ratio is near 16") {
  const double ratio = step_halving_ratio(hill(PeriodicFunction::cosine(1, 5.0)));
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("step counts must be powers of two of at least 256") {
  const auto L = hill(PeriodicFunction{});
  CHECK_THROWS_AS(integrate_fundamental(L, 128), InvalidInput);
  CHECK_THROWS_AS(integrate_fundamental(L, 1000), InvalidInput);
  CHECK_THROWS_AS(integrate_fundamental(DifferentialOperator::general({PeriodicFunction{}, PeriodicFunction{}, PeriodicFunction::constant(2.0)})),
                  InvalidInput);
}

TEST_CASE("concomitant of D² is the area form") {
  const auto form = concomitant(hill(PeriodicFunction{}));
  CHECK(form.kind == FormKind::Antisymmetric);
  CHECK((form.matrix - mat(2, 2, {0, -1, 1, 0})).norm() < 1e-15);
}

TEST_CASE("concomitant of D³ − D is symmetric and indefinite") {
  const auto form = concomitant(d3_minus_d());
  CHECK(form.kind == FormKind::Symmetric);
  CHECK((form.matrix - mat(3, 3, {-1, 0, 1, 0, -1, 0, 1, 0, 0})).norm() < 1e-15);
  CHECK(form.symmetry_residual == 0.0);
  const auto ev = eigenvalues(form.matrix);
  int positive = 0, negative = 0;
  for (int i = 0; i < 3; ++i) (ev(i).real() > 0 ? positive : negative)++;
  CHECK(positive >= 1);
  CHECK(negative >= 1);
}

TEST_CASE("concomitant of D⁴ + 1 is antisymmetric and nondegenerate") {
  const auto form = concomitant(DifferentialOperator::monic({PeriodicFunction::constant(1.0), PeriodicFunction{}, PeriodicFunction{}, PeriodicFunction{}}));
  CHECK(form.kind == FormKind::Antisymmetric);
  CHECK(form.symmetry_residual == 0.0);
  CHECK(std::abs(form.matrix.determinant()) > 0.5);
}

TEST_CASE("concomitant rejects operators of neither symmetry") {
  // D² + D: the adjoint is D² − D.
  CHECK_THROWS_AS(concomitant(DifferentialOperator::monic({PeriodicFunction{}, PeriodicFunction::constant(1.0)})), InvalidInput);
}

TEST_CASE("concomitant is preserved along the flow") {
  const auto a1 = PeriodicFunction::sine(1, 0.3);
  const auto skew = DifferentialOperator::monic({0.5 * a1.derivative(), a1, PeriodicFunction{}});
  CHECK(concomitant_drift(skew, integrate_fundamental(skew, 1024)) < 1e-8);
}

TEST_CASE("group certificates") {
  const auto cert = certify_group(hill(PeriodicFunction::cosine(1, 3.0)), GroupClass::PSp);
  CHECK(cert.pass);
  CHECK(cert.residual <= 1e-6);
  CHECK(cert.form_residual <= 1e-6);

  const auto pso = certify_group(d3_minus_d(), GroupClass::PSO);
  CHECK(pso.pass);
  CHECK(pso.det_residual <= 1e-8);

  const auto damped = DifferentialOperator::monic({PeriodicFunction{}, PeriodicFunction::constant(0.5)});
  CHECK_THROWS_AS(certify_group(damped, GroupClass::PSL), InvalidInput);
  CHECK_THROWS_AS(certify_group(d3_minus_d(), GroupClass::PSp), InvalidInput);
}

TEST_CASE("linear algebra helpers") {
  const Eigen::MatrixXd z = mat(2, 2, {0, 1, -1, 0});
  const Eigen::MatrixXd r = matrix_exp(z);
  CHECK((r - mat(2, 2, {std::cos(1.0), std::sin(1.0), -std::sin(1.0), std::cos(1.0)})).norm() < 1e-14);
  CHECK((matrix_log(r).real() - z).norm() < 1e-13);
  const Eigen::MatrixXd m = mat(2, 2, {2, 1, 0, 3});
  CHECK((cofactor_matrix(m) - m.determinant() * m.inverse().transpose()).norm() < 1e-14);
  Eigen::VectorXd a(2), b(2);
  a << 1, 1;
  b << -2, -2;
  CHECK(projective_distance(a, b) < 1e-15);
  Eigen::VectorXcd s(2), t(2);
  s << 2.0, 3.0;
  t << 3.0, 2.0;
  CHECK(spectrum_distance(s, t) == 0.0);
}
