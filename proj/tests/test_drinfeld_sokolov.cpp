#include <doctest.h>

#include <cmath>
#include <numbers>

#include "circlops/drinfeld_sokolov.hpp"
#include "circlops/error.hpp"
#include "circlops/linalg.hpp"
#include "circlops/monodromy.hpp"
#include "circlops/random.hpp"

using namespace circlops;

namespace {

PeriodicMatrix two_by_two(const PeriodicFunction& a, const PeriodicFunction& b, const PeriodicFunction& c, const PeriodicFunction& d) {
  PeriodicMatrix m(2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

const PeriodicFunction kOne = PeriodicFunction::constant(1.0);

}  // namespace

TEST_CASE("psi projection keeps the strictly lower part") {
  Rng rng(1);
  const auto A = random_level_set(rng, 3, 2, 1.0);
  const auto lower = psi_project(A.connection());
  CHECK(distance(lower, lambda_shift(3)) == 0.0);
  const auto L = lambda_shift(3);
  CHECK(distance(L(1, 0), kOne) == 0.0);
  CHECK(distance(L(2, 1), kOne) == 0.0);
  CHECK(L(2, 0).is_zero());
  CHECK(L(0, 1).is_zero());
}

TEST_CASE("structure checks") {
  CHECK_THROWS_AS(MatrixConnection(two_by_two(kOne, {}, {}, {})), InvalidInput);
  CHECK_THROWS_AS(UnipotentGauge(two_by_two(kOne, {}, kOne, kOne)), InvalidInput);
  CHECK_THROWS_AS(LevelSetElement(MatrixConnection(two_by_two({}, {}, PeriodicFunction::constant(2.0), {}))), InvalidInput);
}

TEST_CASE("gauge action examples") {
  Rng rng(2);
  const auto A = random_level_set(rng, 3, 3, 1.0);
  CHECK(distance(gauge_act(UnipotentGauge::identity(3), A.connection()).entries(), A.connection().entries()) == 0.0);

  // Constant g: plain conjugation.
  Eigen::MatrixXd g0 = Eigen::MatrixXd::Identity(3, 3);
  g0(0, 1) = 0.5;
  g0(1, 2) = -1.5;
  g0(0, 2) = 2.0;
  const UnipotentGauge G(PeriodicMatrix::constant(g0));
  const auto moved = gauge_act(G, A.connection());
  for (double x : {0.1, 0.55, 0.9})
    CHECK((moved.entries().evaluate(x) - g0 * A.connection().entries().evaluate(x) * g0.inverse()).norm() < 1e-12);

  // g = [[1, m], [0, 1]] on the companion of D² + a₀.
  const auto m = PeriodicFunction::sine(1, 0.3);
  const auto a0 = PeriodicFunction::cosine(2, 1.2);
  const MatrixConnection companion(two_by_two({}, -a0, kOne, {}));
  const auto out = gauge_act(UnipotentGauge(two_by_two(kOne, m, {}, kOne)), companion);
  CHECK(distance(out(0, 0), m) < 1e-15);
  CHECK(distance(out(0, 1), -(m * m) - a0 - m.derivative()) < 1e-14);
  CHECK(distance(out(1, 0), kOne) < 1e-15);
  CHECK(distance(out(1, 1), -m) < 1e-15);
}

TEST_CASE("gauges compose and invert") {
  Rng rng(3);
  const auto A = random_level_set(rng, 4, 2, 1.0);
  const auto g = random_gauge(rng, 4, 2, 0.5);
  const auto h = random_gauge(rng, 4, 2, 0.5);
  CHECK(distance(gauge_act(g, gauge_act(h, A.connection())).entries(), gauge_act(g * h, A.connection()).entries()) < 1e-10);
  CHECK(distance((g * g.inverse()).entries(), PeriodicMatrix::identity(4)) < 1e-13);
  CHECK(distance(gauge_act(g.inverse(), gauge_act(g, A.connection())).entries(), A.connection().entries()) < 1e-10);
}

TEST_CASE("[[a, b], [1, −a]] reduces to D² − (a' + a² + b)") {
  // Row convention r' = rA: u = r₀ gives u'' = (a' + a² + b)u.
  const auto a = PeriodicFunction::sine(1, 0.4);
  const auto b = PeriodicFunction::cosine(2, 0.9);
  const auto L = ds_reduce(LevelSetElement(MatrixConnection(two_by_two(a, b, kOne, -a))));
  const auto expected = DifferentialOperator::monic({-(a.derivative() + a * a + b), PeriodicFunction{}});
  CHECK(coefficient_distance(L, expected) < 1e-12);
}

TEST_CASE("embedding is the transposed jet system and reduction inverts it") {
  Rng rng(4);
  for (int n = 2; n <= 4; ++n) {
    std::vector<PeriodicFunction> lower;
    for (int i = 0; i + 1 < n; ++i) lower.push_back(random_function(rng, 3, 1.0));
    lower.emplace_back();
    const auto L = DifferentialOperator::monic(std::move(lower));
    const auto A = embed_iota(L);
    CHECK(distance(A.connection().entries(), jet_system(L).transpose()) == 0.0);
    CHECK(coefficient_distance(ds_reduce(A), L) < 1e-12);
  }
  const auto drifting = DifferentialOperator::monic({PeriodicFunction{}, kOne});
  CHECK_THROWS_AS(embed_iota(drifting), InvalidInput);
}

TEST_CASE("reduction is gauge invariant and its gauge reaches the companion") {
  Rng rng(5);
  for (int n = 2; n <= 4; ++n) {
    const auto A = random_level_set(rng, n, 2, 1.0);
    const auto red = ds_reduce_with_gauge(A);
    CHECK(red.op.coefficient(n - 1).sup_norm() < 1e-9);
    CHECK(distance(gauge_act(red.gauge, A.connection()).entries(), embed_iota(red.op, 1e-9).connection().entries()) < 1e-9);
    const auto g = random_gauge(rng, n, 2, 0.5);
    CHECK(coefficient_distance(ds_reduce(gauge_act(g, A)), red.op) < 1e-8);
    const Eigen::MatrixXd hol = holonomy(A.connection());
    CHECK(spectrum_distance(eigenvalues(hol), eigenvalues(monodromy(red.op))) < 1e-6);
  }
}

TEST_CASE("holonomy witnesses") {
  CHECK((holonomy(MatrixConnection(PeriodicMatrix(3))) - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
  Eigen::MatrixXd Z(2, 2);
  Z << 0.3, 1.0, -2.0, -0.3;
  CHECK((holonomy(MatrixConnection(PeriodicMatrix::constant(Z))) - matrix_exp(Z)).norm() < 1e-12);
}

TEST_CASE("the path exp(tZ) has connection Z and monodromy exp(Z)") {
  Eigen::MatrixXd Z(2, 2);
  Z << 0.3, 1.0, -2.0, -0.3;
  std::vector<Eigen::MatrixXd> frames;
  const int steps = 256;
  for (int j = 0; j <= steps; ++j) frames.push_back(matrix_exp(Z * (static_cast<double>(j) / steps)));
  const auto path = make_path(std::move(frames), matrix_exp(Z));
  CHECK(path.quasi_periodicity_residual() < 1e-12);
  CHECK((monodromy_of_path(path) - matrix_exp(Z)).norm() < 1e-12);
  CHECK(distance(connection_of_path(path, 8).entries(), PeriodicMatrix::constant(Z)) < 1e-9);
  CHECK_THROWS_AS(make_path({Eigen::MatrixXd::Identity(2, 2), 2 * Eigen::MatrixXd::Identity(2, 2)}, Eigen::MatrixXd::Identity(2, 2)),
                  InvalidInput);
}

TEST_CASE("gauges conjugate the holonomy by g(0)") {
  Rng rng(6);
  const auto A = random_level_set(rng, 3, 2, 1.0);
  const auto g = random_gauge(rng, 3, 2, 0.5);
  const Eigen::MatrixXd g0 = g.entries().evaluate(0.0);
  CHECK((holonomy(gauge_act(g, A.connection())) - g0 * holonomy(A.connection()) * g0.inverse()).norm() < 1e-7);
}
