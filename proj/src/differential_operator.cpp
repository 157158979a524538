#include "circlops/differential_operator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "circlops/error.hpp"
#include "circlops/jet.hpp"

namespace circlops {

namespace {

constexpr double kWeightTolerance = 1e-12;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int m = 1; m <= k; ++m) r = r * (n - k + m) / m;
  return r;
}

bool same_weights(const DensityWeights& a, const DensityWeights& b) {
  return std::abs(a.in - b.in) <= kWeightTolerance && std::abs(a.out - b.out) <= kWeightTolerance;
}

std::optional<DensityWeights> merge_weights(const std::optional<DensityWeights>& a,
                                            const std::optional<DensityWeights>& b) {
  if (!a) return b;
  if (!b) return a;
  if (!same_weights(*a, *b)) throw InvalidInput("DifferentialOperator: adding operators between different density bundles");
  return a;
}

}  // namespace

DifferentialOperator DifferentialOperator::monic(std::vector<PeriodicFunction> lower) {
  const int n = static_cast<int>(lower.size());
  DifferentialOperator op;
  op.coeffs_ = std::move(lower);
  op.coeffs_.push_back(PeriodicFunction::constant(1.0));
  op.weights_ = DensityWeights::standard(n);
  return op;
}

DifferentialOperator DifferentialOperator::general(std::vector<PeriodicFunction> all) {
  if (all.empty()) all.emplace_back();
  DifferentialOperator op;
  op.coeffs_ = std::move(all);
  return op;
}

DifferentialOperator DifferentialOperator::power(int n) {
  if (n < 0) throw InvalidInput("DifferentialOperator::power: negative order");
  std::vector<PeriodicFunction> c(static_cast<std::size_t>(n + 1));
  c.back() = PeriodicFunction::constant(1.0);
  return general(std::move(c));
}

const PeriodicFunction& DifferentialOperator::coefficient(int i) const {
  static const PeriodicFunction zero;
  if (i < 0 || i > order()) return zero;
  return coeffs_[static_cast<std::size_t>(i)];
}

bool DifferentialOperator::is_monic() const {
  auto c = coeffs_.back().coefficients();
  if (c[0] != 1.0) return false;
  return std::all_of(c.begin() + 1, c.end(), [](double v) { return v == 0.0; });
}

int DifferentialOperator::band_limit() const {
  int band = 0;
  for (const auto& a : coeffs_) band = std::max(band, a.band_limit());
  return band;
}

DifferentialOperator DifferentialOperator::with_weights(std::optional<DensityWeights> w) const {
  DifferentialOperator op = *this;
  op.weights_ = w;
  return op;
}

DifferentialOperator DifferentialOperator::truncated(int band) const {
  DifferentialOperator op = *this;
  for (auto& a : op.coeffs_) a = a.truncated(band);
  return op;
}

DifferentialOperator DifferentialOperator::trimmed(double tol) const {
  DifferentialOperator op = *this;
  while (op.coeffs_.size() > 1 && op.coeffs_.back().sup_norm() <= tol) op.coeffs_.pop_back();
  return op;
}

PeriodicFunction DifferentialOperator::apply(const PeriodicFunction& u) const {
  PeriodicFunction out;
  PeriodicFunction du = u;
  for (int i = 0; i <= order(); ++i) {
    if (i > 0) du = du.derivative();
    out += coeffs_[static_cast<std::size_t>(i)] * du;
  }
  return out;
}

DifferentialOperator& DifferentialOperator::operator+=(const DifferentialOperator& other) {
  weights_ = merge_weights(weights_, other.weights_);
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

DifferentialOperator& DifferentialOperator::operator-=(const DifferentialOperator& other) {
  weights_ = merge_weights(weights_, other.weights_);
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

DifferentialOperator& DifferentialOperator::operator*=(double s) {
  for (auto& a : coeffs_) a *= s;
  return *this;
}

DifferentialOperator compose(const DifferentialOperator& outer, const DifferentialOperator& inner) {
  std::optional<DensityWeights> w;
  const auto& wo = outer.weights();
  const auto& wi = inner.weights();
  if (wo && wi) {
    if (std::abs(wo->in - wi->out) > kWeightTolerance)
      throw InvalidInput("compose: output weight of the inner operator differs from the input weight of the outer one");
    w = DensityWeights{wi->in, wo->out};
  } else if (wo) {
    w = DensityWeights{wo->in - inner.order(), wo->out};
  } else if (wi) {
    w = DensityWeights{wi->in, wi->out + outer.order()};
  }

  const int p = outer.order();
  const int q = inner.order();
  std::vector<PeriodicFunction> c(static_cast<std::size_t>(p + q + 1));
  // Derivatives of inner coefficients are reused across outer terms.
  std::vector<std::vector<PeriodicFunction>> jets(static_cast<std::size_t>(q + 1));
  for (int j = 0; j <= q; ++j) {
    auto& jet = jets[static_cast<std::size_t>(j)];
    jet.push_back(inner.coefficient(j));
    for (int k = 1; k <= p; ++k) jet.push_back(jet.back().derivative());
  }
  for (int i = 0; i <= p; ++i) {
    const auto& a = outer.coefficient(i);
    if (a.is_zero()) continue;
    for (int j = 0; j <= q; ++j) {
      for (int k = 0; k <= i; ++k) {
        const auto& bk = jets[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        if (bk.is_zero()) continue;
        c[static_cast<std::size_t>(i + j - k)] += binomial(i, k) * (a * bk);
      }
    }
  }
  return DifferentialOperator::general(std::move(c)).with_weights(w);
}

DifferentialOperator formal_adjoint(const DifferentialOperator& op) {
  const int n = op.order();
  std::vector<PeriodicFunction> c(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    const auto& a = op.coefficient(i);
    if (a.is_zero()) continue;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    PeriodicFunction da = a;
    for (int k = i; k >= 0; --k) {
      // da = a^{(i-k)}
      c[static_cast<std::size_t>(k)] += (sign * binomial(i, k)) * da;
      da = da.derivative();
    }
  }
  std::optional<DensityWeights> w;
  if (op.weights()) w = DensityWeights{1.0 - op.weights()->out, 1.0 - op.weights()->in};
  return DifferentialOperator::general(std::move(c)).with_weights(w);
}

PeriodicFunction subprincipal_symbol(const DifferentialOperator& op) {
  if (!op.is_monic()) throw InvalidInput("subprincipal_symbol: operator is not monic");
  const int n = op.order();
  if (n < 1) throw InvalidInput("subprincipal_symbol: order must be >= 1");
  const auto adj = formal_adjoint(op);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return 0.5 * (op.coefficient(n - 1) - sign * adj.coefficient(n - 1));
}

double coefficient_distance(const DifferentialOperator& a, const DifferentialOperator& b) {
  const int n = std::max(a.order(), b.order());
  double d = 0.0;
  for (int i = 0; i <= n; ++i) d = std::max(d, distance(a.coefficient(i), b.coefficient(i)));
  return d;
}

std::string_view to_string(GroupClass g) {
  switch (g) {
    case GroupClass::PSL: return "PSL";
    case GroupClass::PSp: return "PSp";
    case GroupClass::PSO: return "PSO";
  }
  return "?";
}

std::optional<GroupClass> parse_group_class(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "psl") return GroupClass::PSL;
  if (lower == "psp") return GroupClass::PSp;
  if (lower == "pso") return GroupClass::PSO;
  return std::nullopt;
}

void require_parity(int n, GroupClass g) {
  if (g == GroupClass::PSp && n % 2 != 0) throw InvalidInput("PSp requires an even order, got n = " + std::to_string(n));
  if (g == GroupClass::PSO && n % 2 == 0) throw InvalidInput("PSO requires an odd order, got n = " + std::to_string(n));
}

ClassMembership is_in_class(const DifferentialOperator& op, GroupClass g, double tol) {
  if (!op.is_monic()) throw InvalidInput("is_in_class: operator is not monic");
  require_parity(op.order(), g);
  double residual = 0.0;
  switch (g) {
    case GroupClass::PSL: residual = subprincipal_symbol(op).sup_norm(); break;
    case GroupClass::PSp: residual = coefficient_distance(op, formal_adjoint(op)); break;
    case GroupClass::PSO: {
      const auto adj = formal_adjoint(op);
      for (int i = 0; i <= op.order(); ++i)
        residual = std::max(residual, (op.coefficient(i) + adj.coefficient(i)).sup_norm());
      break;
    }
  }
  return {residual <= tol, residual};
}

namespace {

// n+1 trigonometric probes with constant, nonvanishing Wronskian.
std::vector<PeriodicFunction> probes(int count) {
  std::vector<PeriodicFunction> out;
  int k = 1;
  if (count % 2 == 1) out.push_back(PeriodicFunction::constant(1.0));
  while (static_cast<int>(out.size()) < count) {
    out.push_back(PeriodicFunction::cosine(k));
    out.push_back(PeriodicFunction::sine(k));
    ++k;
  }
  return out;
}

// Taylor jet of F at x, orders 0..order.
Jet diffeo_jet(const std::vector<PeriodicFunction>& disp, double x, std::size_t size) {
  Jet j(size);
  double factorial = 1.0;
  for (std::size_t k = 0; k < size; ++k) {
    if (k > 0) factorial *= static_cast<double>(k);
    j[k] = disp[k](x) / factorial;
  }
  j[0] += x;
  if (size > 1) j[1] += 1.0;
  return j;
}

struct ConjugationPoint {
  double y;      // H(x)
  Jet inverse;   // jet of H⁻¹ at y, orders 0..n+1
  double slope;  // H'(x)
};

// H^* ∘ L ∘ (H^*)⁻¹ from per-gridpoint data of H.
template <class PointData>
DifferentialOperator conjugate(const DifferentialOperator& op, int band, PointData point) {
  const int n = op.order();
  const DensityWeights w = op.weights().value_or(DensityWeights::standard(n));
  const int m = projection_grid(band);
  const auto phi = probes(n + 1);
  const auto size = static_cast<std::size_t>(n + 1);

  std::vector<std::vector<PeriodicFunction>> probe_derivs(size);
  for (std::size_t j = 0; j < size; ++j) {
    PeriodicFunction d = phi[j];
    for (int k = 0; k <= n; ++k) {
      probe_derivs[j].push_back(d);
      d = d.derivative();
    }
  }

  std::vector<std::vector<double>> b(size, std::vector<double>(static_cast<std::size_t>(m)));
  Eigen::MatrixXd system(n + 1, n + 1);
  Eigen::VectorXd right(n + 1);
  Eigen::VectorXd scale(n + 1);
  for (int k = 0; k <= n; ++k) scale(k) = std::pow(kTwoPi, k);
  std::vector<double> g(size), a(size), factorial(size + 1, 1.0);
  for (std::size_t k = 1; k <= size; ++k) factorial[k] = factorial[k - 1] * static_cast<double>(k);
  Jet slope(size);
  for (int t = 0; t < m; ++t) {
    const auto ts = static_cast<std::size_t>(t);
    const double x = static_cast<double>(t) / m;
    const ConjugationPoint p = point(x);
    for (std::size_t k = 0; k < size; ++k) slope[k] = static_cast<double>(k + 1) * p.inverse[k + 1];
    Jet kjet(p.inverse.begin(), p.inverse.begin() + static_cast<std::ptrdiff_t>(size));
    const Jet weight = jet_power(slope, w.in);
    for (int i = 0; i <= n; ++i) a[static_cast<std::size_t>(i)] = op.coefficient(i)(p.y);
    const double out_weight = std::pow(p.slope, w.out);
    for (std::size_t j = 0; j < size; ++j) {
      for (std::size_t k = 0; k < size; ++k) {
        g[k] = probe_derivs[j][k](x);
        system(static_cast<int>(j), static_cast<int>(k)) = g[k] / scale(static_cast<int>(k));
      }
      const Jet chi = jet_multiply(weight, jet_compose(g, kjet));
      double value = 0.0;
      for (std::size_t i = 0; i < size; ++i) value += a[i] * chi[i] * factorial[i];
      right(static_cast<int>(j)) = out_weight * value;
    }
    const Eigen::VectorXd sol = system.fullPivLu().solve(right);
    for (int k = 0; k <= n; ++k) b[static_cast<std::size_t>(k)][ts] = sol(k) / scale(k);
  }

  std::vector<PeriodicFunction> c;
  for (int k = 0; k <= n; ++k) c.push_back(PeriodicFunction::from_samples(b[static_cast<std::size_t>(k)], band));
  if (op.is_monic()) c.back() = PeriodicFunction::constant(1.0);
  return DifferentialOperator::general(std::move(c)).with_weights(op.weights());
}

std::vector<PeriodicFunction> displacement_derivatives(const CircleDiffeo& F, int count) {
  std::vector<PeriodicFunction> out{F.displacement()};
  for (int k = 1; k < count; ++k) out.push_back(out.back().derivative());
  return out;
}

}  // namespace

DifferentialOperator pullback_conjugate(const CircleDiffeo& F, const DifferentialOperator& op, int band) {
  const auto size = static_cast<std::size_t>(op.order() + 2);
  const auto disp = displacement_derivatives(F, static_cast<int>(size));
  return conjugate(op, band, [&](double x) {
    const Jet f = diffeo_jet(disp, x, size);
    return ConjugationPoint{f[0], jet_inverse(f, x), f[1]};
  });
}

DifferentialOperator diffeo_act(const CircleDiffeo& F, const DifferentialOperator& op, int band) {
  const auto size = static_cast<std::size_t>(op.order() + 2);
  const auto disp = displacement_derivatives(F, static_cast<int>(size));
  return conjugate(op, band, [&](double x) {
    const double y = F.inverse_at(x);
    Jet f = diffeo_jet(disp, y, size);
    const double slope = 1.0 / f[1];
    f[0] = x;
    return ConjugationPoint{y, std::move(f), slope};
  });
}

}  // namespace circlops
