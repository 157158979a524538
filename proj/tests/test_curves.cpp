#include <doctest.h>

#include <cmath>
#include <numbers>

#include "circlops/error.hpp"
#include "circlops/linalg.hpp"
#include "circlops/monodromy.hpp"
#include "circlops/projective_curve.hpp"
#include "circlops/random.hpp"

using namespace circlops;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kW = 2 * kPi;

DifferentialOperator hill(double a0) { return DifferentialOperator::monic({PeriodicFunction::constant(a0), PeriodicFunction{}}); }

DifferentialOperator d3_minus_d() {
  return DifferentialOperator::monic({PeriodicFunction{}, PeriodicFunction::constant(-1.0), PeriodicFunction{}});
}

template <class F>
ProjectiveCurve sampled(int steps, F&& f, const Eigen::MatrixXd& h) {
  std::vector<Eigen::VectorXd> lift;
  for (int j = 0; j <= steps; ++j) lift.push_back(f(static_cast<double>(j) / steps));
  return make_curve(std::move(lift), h);
}

DifferentialOperator random_psl(Rng& rng, int n, int band) {
  std::vector<PeriodicFunction> lower;
  for (int i = 0; i + 1 < n; ++i) lower.push_back(random_function(rng, band, 1.0));
  lower.emplace_back();
  return DifferentialOperator::monic(std::move(lower));
}

}  // namespace

TEST_CASE("the rescaled circle reconstructs D² + (2π)²") {
  const double norm = 1.0 / std::sqrt(kW);
  const auto circle = sampled(1024, [&](double t) { return Eigen::Vector2d(norm * std::cos(kW * t), norm * std::sin(kW * t)); },
                              Eigen::MatrixXd::Identity(2, 2));
  CHECK(circle.detached());
  CHECK(coefficient_distance(operator_of_curve(circle, 8), hill(kW * kW)) < 1e-8);
  // Rescaling by |W|^{−1/2} makes the result independent of the lift's size.
  const auto big = sampled(1024, [&](double t) { return Eigen::Vector2d(3 * std::cos(kW * t), 3 * std::sin(kW * t)); },
                           Eigen::MatrixXd::Identity(2, 2));
  CHECK(coefficient_distance(operator_of_curve(big, 8), hill(kW * kW)) < 1e-8);
}

TEST_CASE("the curve of D² + ω² is (cos ωt, sin ωt/ω)") {
  const double w = 2.5;
  const auto curve = curve_of_operator(hill(w * w), 512);
  CHECK(curve.n == 2);
  CHECK(curve.steps() == 512);
  for (int j = 0; j <= 512; j += 64) {
    const double t = j / 512.0;
    CHECK(std::abs(curve.lift[static_cast<std::size_t>(j)](0) - std::cos(w * t)) < 1e-10);
    CHECK(std::abs(curve.lift[static_cast<std::size_t>(j)](1) - std::sin(w * t) / w) < 1e-10);
  }
  const auto jets = curve_jets(curve, 1);
  CHECK(std::abs(jets[100](1, 0) + w * std::sin(w * 100 / 512.0)) < 1e-10);
  CHECK(std::abs(jets[100](1, 1) - std::cos(w * 100 / 512.0)) < 1e-10);
  CHECK(curve.quasi_periodicity_residual() < 1e-12);
}

TEST_CASE("round trips: D³ − D and random special operators") {
  CHECK(coefficient_distance(operator_of_curve(curve_of_operator(d3_minus_d())), d3_minus_d()) < 1e-6);
  Rng rng(1);
  for (int n = 2; n <= 4; ++n) {
    const auto L = random_psl(rng, n, 3);
    const auto curve = curve_of_operator(L);
    CHECK(coefficient_distance(operator_of_curve(curve), L) < 1e-6);
    CHECK(coefficient_distance(operator_of_curve(detach(curve)), L) < 1e-6);
  }
}

TEST_CASE("a projective change of lift leaves the operator unchanged") {
  Rng rng(2);
  const auto L = random_psl(rng, 3, 3);
  const auto curve = curve_of_operator(L);
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(3, 3);
  g(0, 2) = 0.4;
  g(2, 1) = -0.3;
  const auto moved = act_group(g, curve);
  CHECK(coefficient_distance(operator_of_curve(moved), L) < 1e-6);
  const Eigen::MatrixXd expected = g * curve.monodromy * g.inverse();
  CHECK((moved.monodromy - expected).norm() < 1e-12);
  CHECK((frame_monodromy(moved) - expected).norm() < 1e-8 * std::max(1.0, expected.norm()));
  CHECK(projective_distance(act_group(Eigen::MatrixXd::Identity(3, 3), curve), curve) == 0.0);
}

TEST_CASE("the dual of the circle is (−sin, cos)") {
  const auto circle = sampled(256, [](double t) { return Eigen::Vector2d(std::cos(kW * t), std::sin(kW * t)); },
                              Eigen::MatrixXd::Identity(2, 2));
  const auto expected = sampled(256, [](double t) { return Eigen::Vector2d(-std::sin(kW * t), std::cos(kW * t)); },
                                Eigen::MatrixXd::Identity(2, 2));
  const auto dual = dual_curve(circle);
  CHECK(projective_distance(dual, expected) < 1e-14);
  CHECK((dual.monodromy - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("dual law and double dual") {
  Rng rng(3);
  for (int n = 2; n <= 4; ++n) {
    const auto L = random_psl(rng, n, 3);
    const auto curve = curve_of_operator(L);
    const auto dual = dual_curve(curve);
    auto expected = formal_adjoint(L).weight_agnostic();
    if (n % 2 == 1) expected *= -1.0;
    CHECK(coefficient_distance(operator_of_curve(dual), expected) < 1e-5);
    CHECK(projective_distance(dual_curve(dual), curve) < 1e-6);
    CHECK((dual.monodromy - curve.monodromy.determinant() * curve.monodromy.inverse().transpose()).norm() < 1e-10);
  }
}

TEST_CASE("skew-adjoint D³ − D gives a self-dual curve") {
  const auto curve = curve_of_operator(d3_minus_d());
  CHECK(self_duality_residual(curve, concomitant(d3_minus_d()).matrix) < 1e-6);
}

TEST_CASE("n = 2 winding witnesses") {
  const auto free = winding_lift_n2(curve_of_operator(hill(0.0)));
  Eigen::MatrixXd shear(2, 2);
  shear << 1, 0, 1, 1;
  CHECK((free.monodromy - shear).norm() < 1e-8);
  CHECK(free.winding == 0);

  const auto half = winding_lift_n2(curve_of_operator(hill(kPi * kPi)));
  CHECK((half.monodromy + Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-8);
  CHECK(half.winding == 1);
  CHECK(half.angle == doctest::Approx(kPi).epsilon(1e-8));

  for (int k = 1; k <= 3; ++k) {
    const auto full = winding_lift_n2(curve_of_operator(hill(k * k * kW * kW)));
    CHECK((full.monodromy - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-8);
    CHECK(full.winding == 2 * k);
  }
  CHECK_THROWS_AS(winding_lift_n2(curve_of_operator(d3_minus_d())), Unsupported);
}

TEST_CASE("a rotation translates the coefficients") {
  Rng rng(4);
  const auto L = random_psl(rng, 2, 3);
  const double s = 0.25;
  const auto moved = act_diffeo(CircleDiffeo::rotation(s), curve_of_operator(L, 1024));
  const auto op = operator_of_curve(moved, 16);
  for (int j = 0; j < 50; ++j) {
    const double x = (j + 0.37) / 50;
    CHECK(std::abs(op.coefficient(0)(x) - L.coefficient(0)(x - s)) < 1e-7);
  }
}

TEST_CASE("curve validation") {
  std::vector<Eigen::VectorXd> lift{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(2, 0)};
  CHECK_THROWS_AS(make_curve(lift, Eigen::MatrixXd::Identity(2, 2)), InvalidInput);
  CHECK_THROWS_AS(frame_monodromy(detach(curve_of_operator(hill(1.0)))), Unsupported);
  // Both components equal: the Wronskian vanishes.
  const auto flat = sampled(256, [](double t) { return Eigen::Vector2d(std::cos(kW * t), std::cos(kW * t)); },
                            Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(operator_of_curve(flat, 8), DegenerateCurve);
}
