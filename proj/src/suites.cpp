#include "circlops/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include "circlops/circle_diffeo.hpp"
#include "circlops/drinfeld_sokolov.hpp"
#include "circlops/error.hpp"
#include "circlops/linalg.hpp"
#include "circlops/monodromy.hpp"
#include "circlops/projective_curve.hpp"

namespace circlops {

namespace {


bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

// NaN-propagating max, so a broken instance cannot hide behind a good one.
double worst(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
  return std::max(a, b);
}

double least(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
  return std::min(a, b);
}

// Runs f(i) for i < count on all cores; rows come back in instance order.
std::vector<std::vector<double>> per_instance(int count, const std::function<std::vector<double>(int)>& f) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        rows[static_cast<std::size_t>(i)] = f(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int threads = std::min<int>(count, static_cast<int>(hw));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<double> column_max(const std::vector<std::vector<double>>& rows) {
  std::vector<double> out(rows.front().size(), 0.0);
  for (const auto& r : rows)
    for (std::size_t k = 0; k < r.size(); ++k) out[k] = worst(out[k], r[k]);
  return out;
}

std::vector<PeriodicFunction> random_lower(Rng& rng, int n, int band, double amplitude) {
  std::vector<PeriodicFunction> lower;
  for (int i = 0; i + 1 < n; ++i) lower.push_back(random_function(rng, band, amplitude));
  lower.emplace_back();
  return lower;
}

// (L + (−1)ⁿL*)/2: self-adjoint for even n, skew-adjoint for odd n, and still
// monic. Its a_{n−1} vanishes up to rounding.
DifferentialOperator symmetrized(const DifferentialOperator& op) {
  const int n = op.order();
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  DifferentialOperator sum = op.weight_agnostic() + sign * formal_adjoint(op).weight_agnostic();
  sum *= 0.5;
  std::vector<PeriodicFunction> lower;
  for (int i = 0; i < n; ++i) lower.push_back(sum.coefficient(i));
  return DifferentialOperator::monic(std::move(lower));
}

// Projects into 𝓡ₙ^G; the parity of n already fixes the symmetry.
DifferentialOperator project_to_class(const DifferentialOperator& op, GroupClass g) {
  if (g == GroupClass::PSL) return op;
  const auto sym = symmetrized(op);
  std::vector<PeriodicFunction> lower(sym.coefficients().begin(), sym.coefficients().end() - 1);
  lower.back() = PeriodicFunction{};
  return DifferentialOperator::monic(std::move(lower));
}

double sup_over_grid(const std::function<double(double)>& f, int points = 1000) {
  double m = 0.0;
  for (int t = 0; t < points; ++t) m = worst(m, std::abs(f((t + 0.37) / points)));
  return m;
}

double operator_scale(const DifferentialOperator& op) {
  double s = 1.0;
  for (const auto& c : op.coefficients()) s = std::max(s, c.sup_norm());
  return s;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// ---------------------------------------------------------------- adjoint

Report adjoint_suite(const RunConfig& c) {
  const int n = c.n;
  const auto rows = per_instance(c.instances, [&](int i) {
    Rng rng = instance_rng(c.seed, static_cast<std::uint64_t>(i), 1);
    const auto l1 = generate_operator(c, i);
    const auto l2 = DifferentialOperator::monic(random_lower(rng, n, c.band, c.amplitude));
    const auto adjoint = formal_adjoint(l1);
    double involution = coefficient_distance(formal_adjoint(adjoint), l1);
    if (n >= 5) involution /= operator_scale(adjoint);
    const auto a1 = l1.weight_agnostic();
    const auto a2 = l2.weight_agnostic();
    // Relative to the compared sides: (L₁L₂)* differentiates its coefficients up
    // to 2n times, which puts them near 1e10 for n = 4 at band 16.
    const auto lhs = formal_adjoint(compose(a1, a2));
    const auto rhs = compose(formal_adjoint(a2), formal_adjoint(a1));
    const double reversal = coefficient_distance(lhs, rhs) / std::max(operator_scale(lhs), operator_scale(rhs));
    const double lead = distance(adjoint.coefficient(n), PeriodicFunction::constant(n % 2 == 0 ? 1.0 : -1.0));
    // A general monic input, a_{n−1} included.
    auto raw = random_lower(rng, n, c.band, c.amplitude);
    raw.back() = random_function(rng, c.band, c.amplitude);
    const auto symmetric = symmetrized(DifferentialOperator::monic(std::move(raw)));
    const double sub = subprincipal_symbol(symmetric).sup_norm();
    const double membership = is_in_class(l1, c.group, c.membership_tol).residual;
    return std::vector<double>{involution, reversal, lead, sub, membership};
  });
  const auto m = column_max(rows);
  Report r{"adjoint", c, {}};
  r.checks.push_back(make_check(n >= 5 ? "adjoint.involution_relative" : "adjoint.involution", m[0], 1e-12));
  r.checks.push_back(make_check("adjoint.composition_reversal_relative", m[1], 1e-12));
  r.checks.push_back(make_check("adjoint.principal_sign", m[2], 0.0));
  r.checks.push_back(make_check(n % 2 == 0 ? "adjoint.self_adjoint_subprincipal" : "adjoint.skew_adjoint_subprincipal", m[3], 1e-12));
  r.checks.push_back(make_check("adjoint.class_membership", m[4], c.membership_tol));
  return r;
}

// ------------------------------------------------------------- schwarzian

struct DiffeoPoint {
  double d1, d2, d3, d4, s, ds;
};

DiffeoPoint diffeo_point(const CircleDiffeo& F, double x) {
  DiffeoPoint p{F.derivative(x, 1), F.derivative(x, 2), F.derivative(x, 3), F.derivative(x, 4), 0.0, 0.0};
  const double r = p.d2 / p.d1;
  p.s = p.d3 / p.d1 - 1.5 * r * r;
  p.ds = p.d4 / p.d1 - p.d3 * p.d2 / (p.d1 * p.d1) - 3.0 * r * (p.d3 / p.d1 - r * r);
  return p;
}

Report schwarzian_suite(const RunConfig& c) {
  // a∘F spreads a band-16 coefficient well past band 64; 128 resolves it.
  const int band = 128;
  const auto rows = per_instance(c.instances, [&](int i) {
    Rng rng = instance_rng(c.seed, static_cast<std::uint64_t>(i), 2);
    const auto F = random_diffeo(rng, 16, 0.05);

    const auto a0 = random_function(rng, c.band, c.amplitude);
    const auto l2 = DifferentialOperator::monic({a0, PeriodicFunction{}});
    const auto t2 = pullback_conjugate(F, l2, band);
    const double rule2 = std::max(t2.coefficient(1).sup_norm(), sup_over_grid([&](double x) {
      const auto p = diffeo_point(F, x);
      return t2.coefficient(0)(x) - (p.d1 * p.d1 * a0(F(x)) + 0.5 * p.s);
    }));

    const auto b0 = random_function(rng, c.band, c.amplitude);
    const auto b1 = random_function(rng, c.band, c.amplitude);
    const auto l3 = DifferentialOperator::monic({b0, b1, PeriodicFunction{}});
    const auto t3 = pullback_conjugate(F, l3, band);
    const double rule3a1 = std::max(t3.coefficient(2).sup_norm(), sup_over_grid([&](double x) {
      const auto p = diffeo_point(F, x);
      return t3.coefficient(1)(x) - (p.d1 * p.d1 * b1(F(x)) + 2.0 * p.s);
    }));
    const double rule3a0 = sup_over_grid([&](double x) {
      const auto p = diffeo_point(F, x);
      return t3.coefficient(0)(x) - (p.d1 * p.d1 * p.d1 * b0(F(x)) + p.d1 * p.d2 * b1(F(x)) + p.ds);
    });

    const auto f = random_diffeo(rng, 16, 0.05);
    const auto g = random_diffeo(rng, 16, 0.05);
    const auto sfg = schwarzian(f.compose(g, band), band);
    const double cocycle = sup_over_grid([&](double x) {
      const auto pf = diffeo_point(f, g(x));
      const auto pg = diffeo_point(g, x);
      return sfg(x) - (pf.s * pg.d1 * pg.d1 + pg.s);
    });

    const auto L = generate_operator(c, i);
    const auto G1 = random_diffeo(rng, 2, 0.05);
    const auto G2 = random_diffeo(rng, 2, 0.05);
    const auto lhs = diffeo_act(G1.compose(G2, band), L, band);
    const auto rhs = diffeo_act(G1, diffeo_act(G2, L, band), band);
    const double action = coefficient_distance(lhs, rhs) / operator_scale(lhs);

    const double identity = coefficient_distance(diffeo_act(CircleDiffeo::identity(), L, band), L);
    const double shift = rng.uniform(-0.5, 0.5);
    const auto rotated = pullback_conjugate(CircleDiffeo::rotation(shift), l2, band);
    const double rotation = std::max(rotated.coefficient(1).sup_norm(),
                                     sup_over_grid([&](double x) { return rotated.coefficient(0)(x) - a0(x + shift); }));
    return std::vector<double>{rule2, rule3a1, rule3a0, cocycle, action, identity, rotation};
  });
  const auto m = column_max(rows);
  Report r{"schwarzian", c, {}};
  r.checks.push_back(make_check("schwarzian.n2_rule_half_schwarzian", m[0], 1e-6));
  r.checks.push_back(make_check("schwarzian.n3_rule_a1", m[1], 1e-6));
  r.checks.push_back(make_check("schwarzian.n3_rule_a0", m[2], 1e-6));
  r.checks.push_back(make_check("schwarzian.cocycle", m[3], 1e-8));
  r.checks.push_back(make_check("schwarzian.group_action_relative", m[4], 1e-8));
  r.checks.push_back(make_check("schwarzian.identity_action", m[5], 1e-10));
  r.checks.push_back(make_check("schwarzian.rotation_n2", m[6], 1e-10));
  return r;
}

// -------------------------------------------------------------------- agd

Report agd_suite(const RunConfig& c) {
  const int n = c.n;
  constexpr double kStep = 1e-4;
  const auto rows = per_instance(c.instances, [&](int i) {
    Rng rng = instance_rng(c.seed, static_cast<std::uint64_t>(i), 3);
    const auto L = generate_operator(c, i);
    const auto X = random_symbol(rng, n, c.band, c.amplitude);
    const auto Y = random_symbol(rng, n, c.band, c.amplitude);
    const auto Z = random_symbol(rng, n, c.band, c.amplitude);

    const double s = rng.uniform(-2.0, 2.0);
    const double linearity = std::max(std::abs(ell_eval({X + Y}, L) - ell_eval({X}, L) - ell_eval({Y}, L)),
                                      std::abs(ell_eval({s * X}, L) - s * ell_eval({X}, L)));

    const auto report = hamiltonian_field_report(X, L);
    const double xy = poisson_bracket({X}, {Y}, L);
    const double yx = poisson_bracket({Y}, {X}, L);
    double antisymmetry = std::abs(xy + yx);
    if (n >= 4) antisymmetry /= std::max(1.0, std::abs(xy));

    // {ℓ_A, {ℓ_B, ℓ_C}}(L) = d{ℓ_B, ℓ_C}(L)[V_A(L)] by central differences.
    const auto outer = [&](const PseudoDifferentialSymbol& a, const PseudoDifferentialSymbol& b, const PseudoDifferentialSymbol& cc) {
      const auto v = hamiltonian_field(a, L);
      const auto plus = L + kStep * v;
      const auto minus = L - kStep * v;
      return (poisson_bracket({b}, {cc}, plus) - poisson_bracket({b}, {cc}, minus)) / (2.0 * kStep);
    };
    double jacobi = std::abs(outer(X, Y, Z) + outer(Y, Z, X) + outer(Z, X, Y));
    if (n >= 4) jacobi /= std::max(1.0, std::abs(outer(X, Y, Z)));

    const auto symbol_l = PseudoDifferentialSymbol::from_operator(L);
    const double depth = distance(residue(pdo_multiply(X, symbol_l, -1)), residue(pdo_multiply(X, symbol_l, -(2 * n + 2))));

    const auto L2 = DifferentialOperator::monic(random_lower(rng, n, c.band, c.amplitude));
    const auto product = pdo_multiply(symbol_l, PseudoDifferentialSymbol::from_operator(L2), 0);
    const auto composed = compose(L.weight_agnostic(), L2.weight_agnostic());
    const double leibniz = coefficient_distance(plus_part(product), composed);
    double contract = report.contract_residual;
    if (n >= 4) contract /= std::max(1.0, report.contract_scale);
    return std::vector<double>{linearity, contract, antisymmetry, jacobi, depth, leibniz};
  });
  const auto m = column_max(rows);
  Report r{"agd", c, {}};
  r.checks.push_back(make_check("agd.linearity", m[0], 1e-12));
  r.checks.push_back(make_check(n >= 4 ? "agd.order_contract_relative" : "agd.order_contract", m[1], 1e-10));
  r.checks.push_back(make_check(n >= 4 ? "agd.antisymmetry_relative" : "agd.antisymmetry", m[2], 1e-9));
  r.checks.push_back(make_check(n >= 4 ? "agd.jacobi_relative" : "agd.jacobi", m[3], 1e-5));
  r.checks.push_back(make_check("agd.residue_depth_stability", m[4], 0.0));
  r.checks.push_back(make_check("agd.leibniz_consistency", m[5], 0.0));
  return r;
}

// -------------------------------------------------------------- monodromy

Report monodromy_suite(const RunConfig& c) {
  const int n = c.n;
  const bool formed = c.group != GroupClass::PSL;
  const auto rows = per_instance(c.instances, [&](int i) {
    Rng rng = instance_rng(c.seed, static_cast<std::uint64_t>(i), 4);
    const auto L = generate_operator(c, i);
    const auto phi = integrate_fundamental(L, c.steps);
    double wronskian_error = 0.0;
    for (double w : wronskian(phi)) wronskian_error = worst(wronskian_error, std::abs(w - 1.0));
    const double det = std::abs(phi.end().determinant() - 1.0);

    auto lower = random_lower(rng, n, c.band, c.amplitude);
    lower.back() = random_function(rng, c.band, c.amplitude);
    const auto general = DifferentialOperator::monic(std::move(lower));
    const double liouville = liouville_residual(general, integrate_fundamental(general, c.steps));

    const double ratio = step_halving_ratio(L);
    const auto cert = certify_group(L, c.group, c.steps, c.certification_tol, c.membership_tol);
    const double drift = formed ? concomitant_drift(L, phi) : 0.0;
    return std::vector<double>{wronskian_error, det, liouville, ratio, cert.residual, drift, phi.error_estimate};
  });
  const auto m = column_max(rows);
  double ratio = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) ratio = least(ratio, row[3]);

  Report r{"monodromy", c, {}};
  r.checks.push_back(make_check("monodromy.wronskian_unit", m[0], 1e-7));
  r.checks.push_back(make_check("monodromy.det_unit", m[1], 1e-7));
  r.checks.push_back(make_check("monodromy.liouville", m[2], 1e-8));
  r.checks.push_back(make_lower_bound_check("monodromy.step_halving_ratio", ratio, 12.0));
  r.checks.push_back(make_check(std::string("monodromy.certify_") + std::string(to_string(c.group)), m[4], c.certification_tol));
  if (formed) r.checks.push_back(make_check("monodromy.concomitant_drift", m[5], 1e-6));
  r.checks.push_back(make_check("monodromy.integration_error", m[6], c.integration_tol));

  const auto hill = [&](double a0) { return DifferentialOperator::monic({PeriodicFunction::constant(a0), PeriodicFunction{}}); };
  Eigen::MatrixXd free_end(2, 2);
  free_end << 1.0, 1.0, 0.0, 1.0;
  r.checks.push_back(make_check("monodromy.witness_free", (monodromy(hill(0.0), c.steps) - free_end).norm(), 1e-8));
  r.checks.push_back(make_check("monodromy.witness_full_turn",
                                (monodromy(hill(kTwoPi * kTwoPi), c.steps) - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-8));
  r.checks.push_back(make_check("monodromy.witness_half_turn",
                                (monodromy(hill(std::numbers::pi * std::numbers::pi), c.steps) + Eigen::MatrixXd::Identity(2, 2)).norm(),
                                1e-8));
  const auto d3 = DifferentialOperator::monic({PeriodicFunction{}, PeriodicFunction::constant(-1.0), PeriodicFunction{}});
  Eigen::VectorXcd expected(3);
  expected << std::exp(1.0), 1.0, std::exp(-1.0);
  r.checks.push_back(make_check("monodromy.witness_d3_minus_d_spectrum", spectrum_distance(eigenvalues(monodromy(d3, c.steps)), expected), 1e-8));
  r.checks.push_back(make_check("monodromy.witness_d3_minus_d_pso", certify_group(d3, GroupClass::PSO, c.steps).residual, 1e-6));
  const auto cosine = DifferentialOperator::monic({PeriodicFunction::cosine(1), PeriodicFunction{}});
  r.checks.push_back(make_check("monodromy.witness_hill_cosine_det", std::abs(monodromy(cosine, c.steps).determinant() - 1.0), 1e-7));
  return r;
}

// ----------------------------------------------------------------- curves

Report curves_suite(const RunConfig& c) {
  const int n = c.n;
  const int out_band = std::max(kDefaultBand, 2 * c.band);
  const auto rows = per_instance(c.instances, [&](int i) {
    Rng rng = instance_rng(c.seed, static_cast<std::uint64_t>(i), 5);
    const auto L = generate_operator(c, i);
    const auto gamma = curve_of_operator(L, c.steps);
    const double roundtrip = coefficient_distance(operator_of_curve(gamma, out_band), L);

    const auto dual = dual_curve(gamma);
    auto adjoint = formal_adjoint(L).weight_agnostic();
    if (n % 2 == 1) adjoint *= -1.0;
    const double dual_law = coefficient_distance(operator_of_curve(dual, out_band), adjoint);
    const double double_dual = projective_distance(dual_curve(dual), gamma);

    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g(a, b) += rng.uniform(-0.3, 0.3);
    const auto moved = act_group(g, gamma);
    const double group_invariance = coefficient_distance(operator_of_curve(moved, out_band), L);
    const Eigen::MatrixXd conjugated = g * gamma.monodromy * g.inverse();
    const double group_monodromy = (frame_monodromy(moved) - conjugated).norm() / std::max(1.0, conjugated.norm());

    // Band 2: for n = 4 a band-4 displacement already drives F·L's a₀ to ~1e6,
    // where the fundamental solution grows enough to cost six digits.
    const auto F = random_diffeo(rng, 2, 0.05);
    const auto FL = diffeo_act(F, L, 128);
    const double spectrum = spectrum_distance(eigenvalues(monodromy(FL, c.steps)), eigenvalues(gamma.monodromy));
    const double equivariance = coefficient_distance(operator_of_curve(act_diffeo(F, gamma), 128), FL.weight_agnostic());

    double self_dual = 0.0;
    if (c.group == GroupClass::PSO) self_dual = self_duality_residual(gamma, concomitant(L).matrix);
    return std::vector<double>{roundtrip, dual_law, double_dual, group_invariance, group_monodromy, spectrum, equivariance, self_dual};
  });
  const auto m = column_max(rows);
  Report r{"curves", c, {}};
  r.checks.push_back(make_check("curves.roundtrip", m[0], 1e-6));
  r.checks.push_back(make_check("curves.dual_law", m[1], 1e-5));
  r.checks.push_back(make_check("curves.double_dual", m[2], 1e-6));
  r.checks.push_back(make_check("curves.group_invariance", m[3], 1e-6));
  r.checks.push_back(make_check("curves.group_monodromy", m[4], 1e-8));
  r.checks.push_back(make_check("curves.diffeo_spectrum", m[5], 1e-6));
  r.checks.push_back(make_check("curves.diffeo_equivariance", m[6], 1e-6));
  if (c.group == GroupClass::PSO) r.checks.push_back(make_check("curves.self_duality", m[7], 1e-6));

  // (cos 2πt, sin 2πt)/√(2π) has Wronskian 1.
  std::vector<Eigen::VectorXd> lift;
  const double norm = 1.0 / std::sqrt(kTwoPi);
  for (int j = 0; j <= c.steps; ++j) {
    const double t = kTwoPi * j / c.steps;
    lift.push_back(Eigen::Vector2d(norm * std::cos(t), norm * std::sin(t)));
  }
  const auto circle = make_curve(std::move(lift), Eigen::MatrixXd::Identity(2, 2));
  const auto hill = [](double a0) { return DifferentialOperator::monic({PeriodicFunction::constant(a0), PeriodicFunction{}}); };
  r.checks.push_back(make_check("curves.witness_circle", coefficient_distance(operator_of_curve(circle, 8), hill(kTwoPi * kTwoPi)), 1e-8));

  const auto d3 = DifferentialOperator::monic({PeriodicFunction{}, PeriodicFunction::constant(-1.0), PeriodicFunction{}});
  r.checks.push_back(make_check("curves.witness_d3_minus_d_roundtrip", coefficient_distance(operator_of_curve(curve_of_operator(d3, c.steps)), d3), 1e-6));

  struct Witness {
    const char* name;
    double a0;
    Eigen::MatrixXd h;
    int winding;
  };
  Eigen::MatrixXd free_h(2, 2);
  free_h << 1.0, 0.0, 1.0, 1.0;  // h = Φ(1)ᵀ
  const std::vector<Witness> witnesses{
      {"curves.winding_free", 0.0, free_h, 0},
      {"curves.winding_half_turn", std::numbers::pi * std::numbers::pi, -Eigen::MatrixXd::Identity(2, 2), 1},
      {"curves.winding_k1", kTwoPi * kTwoPi, Eigen::MatrixXd::Identity(2, 2), 2},
      {"curves.winding_k2", 4.0 * kTwoPi * kTwoPi, Eigen::MatrixXd::Identity(2, 2), 4},
  };
  for (const auto& w : witnesses) {
    const auto lift_n2 = winding_lift_n2(curve_of_operator(hill(w.a0), c.steps));
    const double residual = std::max((lift_n2.monodromy - w.h).norm(), static_cast<double>(std::abs(lift_n2.winding - w.winding)));
    r.checks.push_back(make_check(w.name, residual, 1e-8));
  }
  return r;
}

// --------------------------------------------------------------------- ds

Report ds_suite(const RunConfig& c) {
  const int n = c.n;
  const int out_band = std::max(kDefaultBand, 2 * c.band);
  const auto rows = per_instance(c.instances, [&](int i) {
    Rng rng = instance_rng(c.seed, static_cast<std::uint64_t>(i), 6);
    const auto L = generate_operator(c, i);
    const double iota = coefficient_distance(ds_reduce(embed_iota(L)), L);

    const auto A = random_level_set(rng, n, c.band, c.amplitude);
    const auto reduction = ds_reduce_with_gauge(A);
    const Eigen::MatrixXd hol = holonomy(A.connection(), c.steps);
    const double spectrum = spectrum_distance(eigenvalues(hol), eigenvalues(monodromy(reduction.op, c.steps)));
    const double trace = reduction.op.coefficient(n - 1).sup_norm();

    const auto g = random_gauge(rng, n, c.band, 0.5);
    const auto g2 = random_gauge(rng, n, c.band, 0.5);
    const double orbit = coefficient_distance(ds_reduce(gauge_act(g, A)), reduction.op);
    const double recovery =
        distance(gauge_act(reduction.gauge, A.connection()).entries(), embed_iota(reduction.op, 1e-9).connection().entries());
    const double composition = distance(gauge_act(g, gauge_act(g2, A.connection())).entries(), gauge_act(g * g2, A.connection()).entries());
    const Eigen::MatrixXd g0 = g.entries().evaluate(0.0);
    const double conjugation = (holonomy(gauge_act(g, A.connection()), c.steps) - g0 * hol * g0.inverse()).norm();

    const double cross = spectrum_distance(eigenvalues(holonomy(embed_iota(L).connection(), c.steps)), eigenvalues(monodromy(L, c.steps)));
    const auto path = path_of_connection(A.connection(), Eigen::MatrixXd::Identity(n, n), c.steps);
    const double path_connection = distance(connection_of_path(path, out_band).entries(), A.connection().entries());
    const double path_monodromy = (monodromy_of_path(path) - hol).norm();
    const double level = distance(psi_project(A.connection()), lambda_shift(n));

    // [[a, b], [1, −a]] reduces to D² − (a' + a² + b) in the row convention.
    const auto a = random_function(rng, c.band, c.amplitude);
    const auto b = random_function(rng, c.band, c.amplitude);
    PeriodicMatrix m2(2);
    m2(0, 0) = a;
    m2(0, 1) = b;
    m2(1, 0) = PeriodicFunction::constant(1.0);
    m2(1, 1) = -a;
    const auto reduced = ds_reduce(LevelSetElement(MatrixConnection(std::move(m2))));
    const auto expected = DifferentialOperator::monic({-(a.derivative() + a * a + b), PeriodicFunction{}});
    const double closed_form = coefficient_distance(reduced, expected);
    return std::vector<double>{iota, spectrum, trace, orbit, recovery, composition, conjugation,
                               cross, path_connection, path_monodromy, level, closed_form};
  });
  const auto m = column_max(rows);
  Report r{"ds", c, {}};
  r.checks.push_back(make_check("ds.reduce_embed_identity", m[0], 1e-12));
  r.checks.push_back(make_check("ds.holonomy_spectrum", m[1], 1e-6));
  r.checks.push_back(make_check("ds.subprincipal_vanishes", m[2], 1e-9));
  r.checks.push_back(make_check("ds.gauge_orbit_invariance", m[3], 1e-6));
  r.checks.push_back(make_check("ds.gauge_recovery", m[4], 1e-9));
  r.checks.push_back(make_check("ds.gauge_composition", m[5], 1e-9));
  r.checks.push_back(make_check("ds.holonomy_conjugation", m[6], 1e-7));
  r.checks.push_back(make_check("ds.cross_module_spectrum", m[7], 1e-7));
  r.checks.push_back(make_check("ds.path_connection", m[8], 1e-7));
  r.checks.push_back(make_check("ds.path_monodromy", m[9], 1e-8));
  r.checks.push_back(make_check("ds.level_set_projection", m[10], 0.0));
  r.checks.push_back(make_check("ds.n2_closed_form_row_convention", m[11], 1e-10));

  PeriodicMatrix full(2);
  full(0, 1) = PeriodicFunction::constant(-kTwoPi * kTwoPi);
  full(1, 0) = PeriodicFunction::constant(1.0);
  const LevelSetElement companion{MatrixConnection(std::move(full))};
  Eigen::VectorXcd ones(2);
  ones << 1.0, 1.0;
  const double witness = std::max(spectrum_distance(eigenvalues(holonomy(companion.connection(), c.steps)), ones),
                                  spectrum_distance(eigenvalues(monodromy(ds_reduce(companion), c.steps)), ones));
  r.checks.push_back(make_check("ds.witness_full_turn_spectrum", witness, 1e-6));
  return r;
}

using SuiteFn = Report (*)(const RunConfig&);

const std::map<std::string, SuiteFn, std::less<>>& suite_table() {
  static const std::map<std::string, SuiteFn, std::less<>> table{
      {"adjoint", adjoint_suite}, {"schwarzian", schwarzian_suite}, {"agd", agd_suite},
      {"monodromy", monodromy_suite}, {"curves", curves_suite}, {"ds", ds_suite},
  };
  return table;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.n < 2 || c.n > 4) throw InvalidInput("config: n must lie in [2, 4]");
  if (c.band < 1) throw InvalidInput("config: band must be >= 1");
  if (!power_of_two(c.steps) || c.steps < 256) throw InvalidInput("config: steps must be a power of two >= 256");
  if (!(c.membership_tol > 0.0) || !(c.integration_tol > 0.0) || !(c.certification_tol > 0.0))
    throw InvalidInput("config: tolerances must be positive");
  if (!(c.amplitude > 0.0) || !std::isfinite(c.amplitude)) throw InvalidInput("config: amplitude must be positive");
  if (c.instances < 1) throw InvalidInput("config: instances must be >= 1");
  require_parity(c.n, c.group);
}

RunConfig config_from_json(const Json& j, RunConfig c) {
  if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
  const auto integer = [](const Json& v, const std::string& key) {
    if (!v.is_number_integer()) throw InvalidInput("config: \"" + key + "\" must be an integer");
    return v.get<long long>();
  };
  const auto real = [](const Json& v, const std::string& key) {
    if (!v.is_number()) throw InvalidInput("config: \"" + key + "\" must be a number");
    return v.get<double>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "n") {
      c.n = static_cast<int>(integer(v, key));
    } else if (key == "group") {
      if (!v.is_string()) throw InvalidInput("config: \"group\" must be a string");
      const auto g = parse_group_class(v.get<std::string>());
      if (!g) throw InvalidInput("config: unknown group \"" + v.get<std::string>() + "\"");
      c.group = *g;
    } else if (key == "band") {
      c.band = static_cast<int>(integer(v, key));
    } else if (key == "steps") {
      c.steps = static_cast<int>(integer(v, key));
    } else if (key == "tol") {
      c.certification_tol = real(v, key);
    } else if (key == "membership_tol") {
      c.membership_tol = real(v, key);
    } else if (key == "integration_tol") {
      c.integration_tol = real(v, key);
    } else if (key == "seed") {
      const auto s = integer(v, key);
      if (s < 0) throw InvalidInput("config: seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "amplitude") {
      c.amplitude = real(v, key);
    } else if (key == "instances") {
      c.instances = static_cast<int>(integer(v, key));
    } else if (key != "out" && key != "input") {
      throw InvalidInput("config: unknown key \"" + key + "\"");
    }
  }
  return c;
}

Json to_json(const RunConfig& c) {
  return Json{{"n", c.n},
              {"group", std::string(to_string(c.group))},
              {"band", c.band},
              {"steps", c.steps},
              {"tol", c.certification_tol},
              {"membership_tol", c.membership_tol},
              {"integration_tol", c.integration_tol},
              {"seed", c.seed},
              {"amplitude", c.amplitude},
              {"instances", c.instances}};
}

Rng instance_rng(std::uint64_t seed, std::uint64_t instance, std::uint64_t stream) {
  return Rng(splitmix(splitmix(splitmix(seed) ^ instance) ^ (stream * 0x632BE59BD9B4E019ULL)));
}

DifferentialOperator generate_operator(const RunConfig& c, int instance) {
  // Amplitude 0 is admitted here and yields Dⁿ; runs still require a positive bound.
  if (c.amplitude == 0.0) {
    RunConfig probe = c;
    probe.amplitude = 1.0;
    validate(probe);
  } else {
    validate(c);
  }
  Rng rng = instance_rng(c.seed, static_cast<std::uint64_t>(instance));
  const auto base = DifferentialOperator::monic(random_lower(rng, c.n, c.band, c.amplitude));
  return project_to_class(base, c.group);
}

PseudoDifferentialSymbol random_symbol(Rng& rng, int n, int band, double amplitude) {
  PseudoDifferentialSymbol x;
  for (int k = 1; k <= n; ++k) x.set(-k, random_function(rng, band, amplitude));
  return x;
}

Check make_check(std::string name, double residual, double tol) { return {std::move(name), residual, tol, residual <= tol}; }

Check make_lower_bound_check(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value >= threshold};
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Json Report::to_json() const {
  Json list = Json::array();
  for (const auto& c : checks) {
    // JSON has no NaN; a failed evaluation is reported as null.
    Json residual = std::isfinite(c.residual) ? Json(c.residual) : Json(nullptr);
    list.push_back(Json{{"name", c.name}, {"residual", residual}, {"tol", c.tol}, {"pass", c.pass}});
  }
  return Json{{"suite", suite}, {"config", circlops::to_json(config)}, {"checks", list}, {"pass", pass()}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"adjoint", "schwarzian", "agd", "monodromy", "curves", "ds"};
  return names;
}

Report run_suite(std::string_view name, const RunConfig& config) {
  const auto& table = suite_table();
  const auto it = table.find(name);
  if (it == table.end()) throw InvalidInput("unknown suite \"" + std::string(name) + "\"");
  validate(config);
  return it->second(config);
}

}  // namespace circlops
