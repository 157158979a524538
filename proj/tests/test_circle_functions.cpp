#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "circlops/circle_diffeo.hpp"
#include "circlops/error.hpp"
#include "circlops/periodic_function.hpp"
#include "circlops/quasi_periodic.hpp"
#include "circlops/random.hpp"

using namespace circlops;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double sup_pointwise(F&& f, int points = 4096) {
  double worst = 0.0;
  for (int j = 0; j < points; ++j) worst = std::max(worst, std::abs(f((j + 0.37) / points)));
  return worst;
}

}  // namespace

TEST_CASE("trigonometric constructors evaluate as cos and sin") {
  const auto c = PeriodicFunction::cosine(3, 2.0);
  const auto s = PeriodicFunction::sine(2, -0.5);
  CHECK(c.band_limit() == 3);
  CHECK(c.cos_coeff(3) == 2.0);
  CHECK(s.sin_coeff(2) == -0.5);
  CHECK(sup_pointwise([&](double x) { return c(x) - 2.0 * std::cos(6 * kPi * x); }) < 1e-14);
  CHECK(sup_pointwise([&](double x) { return s(x) + 0.5 * std::sin(4 * kPi * x); }) < 1e-14);
}

TEST_CASE("derivative of cos(2πkθ) is −2πk sin(2πkθ)") {
  const auto d = PeriodicFunction::cosine(2).derivative();
  CHECK(d.cos_coeff(2) == doctest::Approx(0.0));
  CHECK(d.sin_coeff(2) == doctest::Approx(-4 * kPi));
  const auto d3 = PeriodicFunction::sine(1).derivative(3);
  CHECK(d3.cos_coeff(1) == doctest::Approx(-std::pow(2 * kPi, 3)));
  CHECK(PeriodicFunction::constant(5.0).derivative().is_zero());
}

TEST_CASE("multiply grows the band exactly") {
  const auto c = PeriodicFunction::cosine(1);
  const auto p = multiply(c, c);  // cos² = 1/2 + cos(2·)/2
  CHECK(p.band_limit() == 2);
  CHECK(p.mean() == doctest::Approx(0.5));
  CHECK(p.cos_coeff(2) == doctest::Approx(0.5));
  CHECK(p.cos_coeff(1) == doctest::Approx(0.0));

  Rng rng(7);
  const auto f = random_function(rng, 5, 1.0);
  const auto g = random_function(rng, 4, 1.0);
  const auto fg = f * g;
  CHECK(fg.band_limit() == 9);
  CHECK(sup_pointwise([&](double x) { return fg(x) - f(x) * g(x); }) < 1e-14);
}

TEST_CASE("integral is the mean and the antiderivative inverts the derivative") {
  const auto f = PeriodicFunction::constant(0.25) + PeriodicFunction::sine(3, 4.0);
  CHECK(integrate_circle(f) == doctest::Approx(0.25));
  Rng rng(11);
  const auto g = random_function(rng, 6, 1.0, true);
  CHECK(distance(g.antiderivative().derivative(), g) < 1e-14);
  CHECK(g.antiderivative().mean() == 0.0);
}

TEST_CASE("from_samples recovers a band-limited function") {
  Rng rng(3);
  const auto f = random_function(rng, 8, 1.0);
  const auto samples = f.sample(64);
  CHECK(distance(PeriodicFunction::from_samples(samples, 8), f) < 1e-14);
  CHECK_THROWS_AS(PeriodicFunction::from_samples(samples, 32), InvalidInput);
}

TEST_CASE("truncation residual counts the discarded mass") {
  const auto f = PeriodicFunction::cosine(1) + PeriodicFunction::sine(4, -0.25);
  CHECK(f.truncation_residual(3) == doctest::Approx(0.25));
  CHECK(f.truncated(3).band_limit() == 3);
  CHECK(f.coefficient_norm() == doctest::Approx(1.25));
}

TEST_CASE("diffeomorphisms reject a non-positive slope") {
  CHECK_THROWS_AS(CircleDiffeo(PeriodicFunction::sine(1, 0.2)), InvalidInput);
  const CircleDiffeo F(PeriodicFunction::sine(1, 0.1));
  CHECK(F.orientation_certificate() > 0.0);
  CHECK(F(0.25) == doctest::Approx(0.35));
}

TEST_CASE("identity and rotation pullbacks") {
  Rng rng(5);
  const auto f = random_function(rng, 6, 1.0);
  CHECK(distance(pullback_density(CircleDiffeo::identity(), f, 1.5, 16), f) < 1e-14);
  const auto shifted = pullback_density(CircleDiffeo::rotation(0.3), f, 2.0, 16);
  CHECK(sup_pointwise([&](double x) { return shifted(x) - f(x + 0.3); }) < 1e-13);
}

TEST_CASE("pullback of cos by x + 0.1 sin 2πx matches pointwise composition") {
  const CircleDiffeo F(PeriodicFunction::sine(1, 0.1));
  const auto c = PeriodicFunction::cosine(1);
  const auto slope = [](double x) { return 1.0 + 0.2 * kPi * std::cos(2 * kPi * x); };
  const auto lift = [](double x) { return x + 0.1 * std::sin(2 * kPi * x); };
  const auto p0 = pullback_density(F, c, 0.0, 64);
  const auto p1 = pullback_density(F, c, 1.0, 64);
  CHECK(sup_pointwise([&](double x) { return p0(x) - std::cos(2 * kPi * lift(x)); }) < 1e-12);
  CHECK(sup_pointwise([&](double x) { return p1(x) - slope(x) * std::cos(2 * kPi * lift(x)); }) < 1e-12);
}

TEST_CASE("Schwarzian of x + 0.05 sin 2πx: closed form and a finite-difference stencil") {
  const double eps = 0.05;
  const double w = 2 * kPi;
  const CircleDiffeo F(PeriodicFunction::sine(1, eps));
  const auto S = schwarzian(F, 64);
  const auto lift = [&](double x) { return x + eps * std::sin(w * x); };
  const auto closed = [&](double x) {
    const double d1 = 1 + eps * w * std::cos(w * x);
    const double d2 = -eps * w * w * std::sin(w * x);
    const double d3 = -eps * w * w * w * std::cos(w * x);
    return d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
  };
  // Fourth-order central differences of the lift itself.
  const double h = 1e-3;
  const auto stencil = [&](double x) {
    const double m3 = lift(x - 3 * h), m2 = lift(x - 2 * h), m1 = lift(x - h), p1 = lift(x + h), p2 = lift(x + 2 * h), p3 = lift(x + 3 * h);
    const double d1 = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h);
    const double d2 = (-p2 + 16 * p1 - 30 * lift(x) + 16 * m1 - m2) / (12 * h * h);
    const double d3 = (-p3 + 8 * p2 - 13 * p1 + 13 * m1 - 8 * m2 + m3) / (8 * h * h * h);
    return d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
  };
  CHECK(sup_pointwise([&](double x) { return S(x) - closed(x); }) < 1e-10);
  CHECK(sup_pointwise([&](double x) { return S(x) - stencil(x); }, 512) < 1e-6);
  CHECK(schwarzian(CircleDiffeo::rotation(0.2), 16).sup_norm() < 1e-15);
}

TEST_CASE("compose and inverse agree with pointwise evaluation") {
  Rng rng(9);
  const auto f = random_diffeo(rng, 4, 0.05);
  const auto g = random_diffeo(rng, 4, 0.05);
  const auto fg = f.compose(g, 64);
  CHECK(sup_pointwise([&](double x) { return fg(x) - f(g(x)); }, 1024) < 1e-13);
  const auto inv = f.inverse(64);
  CHECK(sup_pointwise([&](double x) { return f(inv(x)) - x; }, 1024) < 1e-12);
  CHECK(std::abs(f(f.inverse_at(0.4)) - 0.4) < 1e-12);
}

TEST_CASE("random diffeomorphisms respect their amplitude and slope bounds") {
  Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    const auto F = random_diffeo(rng, 8, 0.05);
    CHECK(F.displacement().sup_norm() <= 0.05 + 1e-15);
    CHECK(F.orientation_certificate() >= 0.5 - 1e-12);
  }
}

TEST_CASE("quasi-periodic series differentiates exp(tZ)P(t)") {
  // X(t) = p(t)(cos t, −sin t)ᵀ with p periodic and X(t+1) = R X(t).
  const auto p = [](double t) { return 1.0 + 0.1 * std::cos(2 * kPi * t); };
  const auto dp = [](double t) { return -0.2 * kPi * std::sin(2 * kPi * t); };
  Eigen::MatrixXd h(2, 2);
  h << std::cos(1.0), std::sin(1.0), -std::sin(1.0), std::cos(1.0);
  const int m = 64;
  std::vector<Eigen::MatrixXd> samples;
  for (int j = 0; j < m; ++j) {
    const double t = static_cast<double>(j) / m;
    Eigen::MatrixXd x(2, 1);
    x << p(t) * std::cos(t), -p(t) * std::sin(t);
    samples.push_back(x);
  }
  const QuasiPeriodicSeries series(samples, h);
  const double t = 0.3;
  const Eigen::MatrixXd d = series.evaluate(t, 1);
  CHECK(std::abs(d(0, 0) - (dp(t) * std::cos(t) - p(t) * std::sin(t))) < 1e-10);
  CHECK(std::abs(d(1, 0) - (-dp(t) * std::sin(t) - p(t) * std::cos(t))) < 1e-10);
  CHECK(std::abs(series.evaluate(1.7)(0, 0) - p(1.7) * std::cos(1.7)) < 1e-10);
}
