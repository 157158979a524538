#include "circlops/projective_curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "circlops/error.hpp"
#include "circlops/jet.hpp"
#include "circlops/linalg.hpp"
#include "circlops/quasi_periodic.hpp"

namespace circlops {

namespace {

// A lift whose log|W| oscillates by less than this is taken as Wronskian-constant:
// renormalizing jet error would inject its n-th derivatives into the coefficients.
constexpr double kConstantWronskian = 1e-9;

QuasiPeriodicSeries series_of(const ProjectiveCurve& curve) {
  std::vector<Eigen::MatrixXd> samples(curve.lift.begin(), curve.lift.end() - 1);
  return QuasiPeriodicSeries(samples, curve.monodromy);
}

// Keeps modes up to the last one above max(1e-15·peak, 10·median of the upper half).
PeriodicFunction denoised(const PeriodicFunction& f) {
  const int band = f.band_limit();
  std::vector<double> magnitude;
  for (int k = 1; k <= band; ++k) magnitude.push_back(std::hypot(f.cos_coeff(k), f.sin_coeff(k)));
  if (magnitude.empty()) return f;
  const double peak = *std::max_element(magnitude.begin(), magnitude.end());
  std::vector<double> tail(magnitude.begin() + static_cast<std::ptrdiff_t>(magnitude.size() / 2), magnitude.end());
  std::nth_element(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(tail.size() / 2), tail.end());
  const double threshold = std::max(1e-15 * peak, 10.0 * tail[tail.size() / 2]);
  int keep = 0;
  for (int k = band; k >= 1; --k)
    if (magnitude[static_cast<std::size_t>(k - 1)] > threshold) {
      keep = k;
      break;
    }
  return f.truncated(keep);
}

// Γ(t) for t ∈ [0,1] from the grid, with the endpoint forced onto hΓ(0).
void close_curve(ProjectiveCurve& curve) { curve.lift.back() = curve.monodromy * curve.lift.front(); }

// Derivative orders a source must support: operator_of_curve needs 2n−1 and
// each duality adds n−2, so two nested duals stay below this.
int jet_order_cap(int n) { return 4 * n + 2; }

// Γ^{(i)}, i < n, from the frames (series off the grid); higher orders from
// u^{(n+m)} = −Σ_{i<n} Σ_l C(m,l) a_i^{(l)} u^{(i+m−l)}.
class OperatorJets final : public CurveJetSource {
 public:
  OperatorJets(const DifferentialOperator& op, const FundamentalSolution& phi)
      : n_(op.order()), frames_(phi.frames), series_(transposed(phi)) {
    const int cap = jet_order_cap(n_);
    for (int i = 0; i < n_; ++i) {
      std::vector<PeriodicFunction> d{op.coefficient(i)};
      for (int l = 1; l <= cap; ++l) d.push_back(d.back().derivative());
      coefficient_derivs_.push_back(std::move(d));
    }
  }

  Eigen::MatrixXd taylor(double t, int order) const override {
    if (order > jet_order_cap(n_)) throw InvalidInput("curve jets: derivative order exceeds the supported cap");
    const int m = static_cast<int>(frames_.size()) - 1;
    Eigen::MatrixXd d(std::max(order, n_ - 1) + 1, n_);
    const double grid = t * m;
    const double j = std::round(grid);
    if (std::abs(grid - j) < 1e-9 && j >= 0.0 && j <= m)
      d.topRows(n_) = frames_[static_cast<std::size_t>(j)];
    else
      d.topRows(n_) = series_.evaluate(t).transpose();
    std::vector<std::vector<double>> a(static_cast<std::size_t>(n_));
    for (int r = n_; r <= order; ++r) {
      const int mm = r - n_;
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(n_);
      double binom = 1.0;
      for (int l = 0; l <= mm; ++l) {
        if (l > 0) binom = binom * (mm - l + 1) / l;
        for (int i = 0; i < n_; ++i) {
          auto& cache = a[static_cast<std::size_t>(i)];
          while (static_cast<int>(cache.size()) <= l)
            cache.push_back(coefficient_derivs_[static_cast<std::size_t>(i)][cache.size()](t));
          acc += binom * cache[static_cast<std::size_t>(l)] * d.row(i + mm - l);
        }
      }
      d.row(r) = -acc;
    }
    Eigen::MatrixXd out = d.topRows(order + 1);
    double factorial = 1.0;
    for (int k = 1; k <= order; ++k) {
      factorial *= k;
      out.row(k) /= factorial;
    }
    return out;
  }

 private:
  static QuasiPeriodicSeries transposed(const FundamentalSolution& phi) {
    std::vector<Eigen::MatrixXd> samples;
    for (std::size_t j = 0; j + 1 < phi.frames.size(); ++j) samples.emplace_back(phi.frames[j].transpose());
    return QuasiPeriodicSeries(samples, phi.end().transpose());
  }

  int n_;
  std::vector<Eigen::MatrixXd> frames_;
  QuasiPeriodicSeries series_;
  std::vector<std::vector<PeriodicFunction>> coefficient_derivs_;
};

// Cofactors of the rows Γ, …, Γ^{(n−2)}, in Taylor arithmetic.
Eigen::MatrixXd cofactor_taylor(const Eigen::MatrixXd& p, int n, int order) {
  std::vector<std::vector<Jet>> rows(static_cast<std::size_t>(n - 1), std::vector<Jet>(static_cast<std::size_t>(n)));
  for (int i = 0; i + 1 < n; ++i)
    for (int c = 0; c < n; ++c) {
      Jet e(static_cast<std::size_t>(order + 1));
      double factor = 1.0;  // (i+k)!/k!
      for (int q = 1; q <= i; ++q) factor *= q;
      for (int k = 0; k <= order; ++k) {
        if (k > 0) factor = factor * (i + k) / k;
        e[static_cast<std::size_t>(k)] = p(i + k, c) * factor;
      }
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = std::move(e);
    }
  Eigen::MatrixXd out(order + 1, n);
  for (int col = 0; col < n; ++col) {
    std::vector<std::vector<Jet>> sub;
    for (const auto& row : rows) {
      std::vector<Jet> r;
      for (int c = 0; c < n; ++c)
        if (c != col) r.push_back(row[static_cast<std::size_t>(c)]);
      sub.push_back(std::move(r));
    }
    const Jet det = jet_determinant(sub);
    const double sign = ((n - 1 + col) % 2 == 0) ? 1.0 : -1.0;
    for (int k = 0; k <= order; ++k) out(k, col) = sign * det[static_cast<std::size_t>(k)];
  }
  return out;
}

class DualJets final : public CurveJetSource {
 public:
  DualJets(std::shared_ptr<const CurveJetSource> parent, int n) : parent_(std::move(parent)), n_(n) {}
  Eigen::MatrixXd taylor(double t, int order) const override {
    return cofactor_taylor(parent_->taylor(t, order + n_ - 2), n_, order);
  }

 private:
  std::shared_ptr<const CurveJetSource> parent_;
  int n_;
};

class GroupJets final : public CurveJetSource {
 public:
  GroupJets(Eigen::MatrixXd g, std::shared_ptr<const CurveJetSource> parent) : g_(std::move(g)), parent_(std::move(parent)) {}
  Eigen::MatrixXd taylor(double t, int order) const override { return parent_->taylor(t, order) * g_.transpose(); }

 private:
  Eigen::MatrixXd g_;
  std::shared_ptr<const CurveJetSource> parent_;
};

// (F·Γ)(x) = Γ(F⁻¹(x)): Γ's jet at y = F⁻¹(x) composed with the reverted jet of F.
class DiffeoJets final : public CurveJetSource {
 public:
  DiffeoJets(const CircleDiffeo& F, std::shared_ptr<const CurveJetSource> parent, int n) : F_(F), parent_(std::move(parent)) {
    displacement_derivs_.push_back(F.displacement());
    for (int k = 1; k <= jet_order_cap(n); ++k) displacement_derivs_.push_back(displacement_derivs_.back().derivative());
  }

  Eigen::MatrixXd taylor(double x, int order) const override {
    if (order >= static_cast<int>(displacement_derivs_.size())) throw InvalidInput("curve jets: derivative order exceeds the supported cap");
    const double y = F_.inverse_at(x);
    const auto size = static_cast<std::size_t>(order + 1);
    Jet f(size);
    double factorial = 1.0;
    for (std::size_t k = 0; k < size; ++k) {
      if (k > 0) factorial *= static_cast<double>(k);
      f[k] = displacement_derivs_[k](y) / factorial;
    }
    f[0] += y;
    if (size > 1) f[1] += 1.0;
    const Jet u = jet_inverse(f, y);
    const Eigen::MatrixXd p = taylor_to_derivatives(parent_->taylor(y, order));
    Eigen::MatrixXd out(order + 1, p.cols());
    std::vector<double> g(size);
    for (int c = 0; c < p.cols(); ++c) {
      for (std::size_t k = 0; k < size; ++k) g[k] = p(static_cast<int>(k), c);
      const Jet composed = jet_compose(g, u);
      for (std::size_t k = 0; k < size; ++k) out(static_cast<int>(k), c) = composed[k];
    }
    return out;
  }

 private:
  CircleDiffeo F_;
  std::shared_ptr<const CurveJetSource> parent_;
  std::vector<PeriodicFunction> displacement_derivs_;
};

// Derivative rows 0..n of the Wronskian-1 lift |W|^{−1/n}Γ at one point, from
// Taylor rows 0..2n−1 of Γ. Returns false when W vanishes; `sign` receives sgn W.
bool unit_lift_jets(const Eigen::MatrixXd& p, int n, Eigen::MatrixXd& out, double& sign) {
  std::vector<std::vector<Jet>> entries(static_cast<std::size_t>(n), std::vector<Jet>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) {
      Jet e(static_cast<std::size_t>(n + 1));
      double factor = 1.0;
      for (int q = 1; q <= i; ++q) factor *= q;
      for (int k = 0; k <= n; ++k) {
        if (k > 0) factor = factor * (i + k) / k;
        e[static_cast<std::size_t>(k)] = p(i + k, c) * factor;
      }
      entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = std::move(e);
    }
  Jet w = jet_determinant(entries);
  if (!(w[0] != 0.0)) return false;
  sign = w[0] > 0.0 ? 1.0 : -1.0;
  for (double& x : w) x *= sign;
  const Jet scale = jet_power(w, -1.0 / n);
  out.resize(n + 1, n);
  for (int c = 0; c < n; ++c) {
    Jet g(static_cast<std::size_t>(n + 1));
    for (int k = 0; k <= n; ++k) g[static_cast<std::size_t>(k)] = p(k, c);
    const Jet u = jet_multiply(g, scale);
    for (int k = 0; k <= n; ++k) out(k, c) = u[static_cast<std::size_t>(k)];
  }
  out = taylor_to_derivatives(out);
  return true;
}

}  // namespace

double ProjectiveCurve::quasi_periodicity_residual() const { return (lift.back() - monodromy * lift.front()).norm(); }

ProjectiveCurve make_curve(std::vector<Eigen::VectorXd> lift, Eigen::MatrixXd h, double tol) {
  if (lift.size() < 17) throw InvalidInput("make_curve: too few samples");
  const auto n = static_cast<int>(h.rows());
  if (n < 2 || h.cols() != n) throw InvalidInput("make_curve: monodromy must be square of size >= 2");
  for (const auto& v : lift)
    if (v.size() != n) throw InvalidInput("make_curve: sample dimension differs from the monodromy size");
  ProjectiveCurve curve{n, std::move(lift), std::move(h)};
  const double scale = std::max(1.0, curve.lift.back().norm());
  if (curve.quasi_periodicity_residual() > tol * scale)
    throw InvalidInput("make_curve: quasi-periodicity residual " + std::to_string(curve.quasi_periodicity_residual()) +
                       " exceeds tolerance");
  return curve;
}

ProjectiveCurve curve_of_solution(const FundamentalSolution& phi) {
  ProjectiveCurve curve;
  curve.n = phi.n;
  for (const auto& f : phi.frames) curve.lift.emplace_back(f.row(0).transpose());
  curve.monodromy = phi.end().transpose();
  return curve;
}

ProjectiveCurve curve_of_operator(const DifferentialOperator& op, int steps) {
  if (op.order() < 2) throw InvalidInput("curve_of_operator: order must be >= 2");
  const auto phi = integrate_fundamental(op, steps);
  auto curve = curve_of_solution(phi);
  curve.jets = std::make_shared<OperatorJets>(op, phi);
  return curve;
}

ProjectiveCurve detach(ProjectiveCurve curve) {
  curve.jets.reset();
  return curve;
}

std::vector<Eigen::MatrixXd> curve_jets(const ProjectiveCurve& curve, int order) {
  const int m = curve.steps();
  if (!curve.detached()) {
    std::vector<Eigen::MatrixXd> jets;
    jets.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) jets.push_back(taylor_to_derivatives(curve.jets->taylor(static_cast<double>(j) / m, order)));
    return jets;
  }
  const auto series = series_of(curve);
  std::vector<Eigen::MatrixXd> jets(static_cast<std::size_t>(m), Eigen::MatrixXd(order + 1, curve.n));
  for (int r = 0; r <= order; ++r) {
    const auto d = series.derivative_samples(r);
    for (int j = 0; j < m; ++j) jets[static_cast<std::size_t>(j)].row(r) = d[static_cast<std::size_t>(j)].col(0).transpose();
  }
  return jets;
}

DifferentialOperator operator_of_curve(const ProjectiveCurve& curve, int band) {
  const int n = curve.n;
  const int m = curve.steps();
  if (n < 2) throw InvalidInput("operator_of_curve: n must be >= 2");
  if (2 * band >= m) throw InvalidInput("operator_of_curve: band too large for the sample count");

  std::vector<Eigen::MatrixXd> jets;
  if (!curve.detached()) {
    jets.resize(static_cast<std::size_t>(m));
    double first_sign = 0.0;
    for (int j = 0; j < m; ++j) {
      double sign = 0.0;
      if (!unit_lift_jets(curve.jets->taylor(static_cast<double>(j) / m, 2 * n - 1), n, jets[static_cast<std::size_t>(j)], sign) ||
          (j > 0 && sign != first_sign))
        throw DegenerateCurve("operator_of_curve: Wronskian vanishes or changes sign", static_cast<std::size_t>(j));
      if (j == 0) first_sign = sign;
    }
  } else {
    // Wronskian-1 lift: Γ̃ = |W|^{-1/n} Γ with log|W| = κt + p(t), p denoised.
    ProjectiveCurve unit = curve;
    const auto raw = curve_jets(curve, n - 1);
    std::vector<double> periodic(static_cast<std::size_t>(m));
    const double kappa = std::log(std::abs(curve.monodromy.determinant()));
    double first_sign = 0.0;
    for (int j = 0; j < m; ++j) {
      const double w = raw[static_cast<std::size_t>(j)].determinant();
      const double sign = w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
      if (j == 0) first_sign = sign;
      if (sign == 0.0 || sign != first_sign)
        throw DegenerateCurve("operator_of_curve: Wronskian vanishes or changes sign", static_cast<std::size_t>(j));
      periodic[static_cast<std::size_t>(j)] = std::log(std::abs(w)) - kappa * j / m;
    }
    auto p = denoised(PeriodicFunction::from_samples(periodic, m / 2 - 1));
    if ((p - p.truncated(0)).coefficient_norm() <= kConstantWronskian) p = p.truncated(0);
    const auto pv = p.sample(m);
    for (int j = 0; j < m; ++j)
      unit.lift[static_cast<std::size_t>(j)] *= std::exp(-(kappa * j / m + pv[static_cast<std::size_t>(j)]) / n);
    unit.monodromy *= std::exp(-kappa / n);
    close_curve(unit);
    jets = curve_jets(unit, n);
  }

  std::vector<std::vector<double>> b(static_cast<std::size_t>(n - 1), std::vector<double>(static_cast<std::size_t>(m)));
  for (int j = 0; j < m; ++j) {
    const auto& jet = jets[static_cast<std::size_t>(j)];
    const double w = minor_without_row(jet, n);
    for (int k = 0; k + 1 < n; ++k) {
      const double s = ((n + k) % 2 == 0) ? 1.0 : -1.0;
      b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = s * minor_without_row(jet, k) / w;
    }
  }
  std::vector<PeriodicFunction> lower;
  for (int k = 0; k + 1 < n; ++k) lower.push_back(PeriodicFunction::from_samples(b[static_cast<std::size_t>(k)], band));
  lower.emplace_back(band);
  return DifferentialOperator::monic(std::move(lower));
}

Eigen::MatrixXd frame_monodromy(const ProjectiveCurve& curve) {
  if (curve.detached()) throw Unsupported("frame_monodromy: curve has no jet source");
  const Eigen::MatrixXd j0 = taylor_to_derivatives(curve.jets->taylor(0.0, curve.n - 1));
  const Eigen::MatrixXd j1 = taylor_to_derivatives(curve.jets->taylor(1.0, curve.n - 1));
  return j0.fullPivLu().solve(j1).transpose();
}

ProjectiveCurve dual_curve(const ProjectiveCurve& curve) {
  const int n = curve.n;
  const int m = curve.steps();
  const auto jets = curve_jets(curve, n - 2);
  ProjectiveCurve dual;
  dual.n = n;
  dual.monodromy = cofactor_matrix(curve.monodromy);
  dual.lift.resize(static_cast<std::size_t>(m + 1));
  for (int j = 0; j < m; ++j) {
    const auto& rows = jets[static_cast<std::size_t>(j)];
    Eigen::VectorXd c(n);
    for (int col = 0; col < n; ++col) {
      Eigen::MatrixXd sub(n - 1, n - 1);
      for (int s = 0, ss = 0; s < n; ++s)
        if (s != col) sub.col(ss++) = rows.col(s);
      c(col) = (((n - 1 + col) % 2 == 0) ? 1.0 : -1.0) * sub.determinant();
    }
    const double scale = std::pow(rows.norm(), n - 1);
    if (!(c.norm() > 1e-12 * scale)) throw DegenerateCurve("dual_curve: osculating flag is rank deficient", static_cast<std::size_t>(j));
    dual.lift[static_cast<std::size_t>(j)] = c;
  }
  close_curve(dual);
  if (!curve.detached()) dual.jets = std::make_shared<DualJets>(curve.jets, n);
  return dual;
}

double projective_distance(const ProjectiveCurve& a, const ProjectiveCurve& b) {
  if (a.n != b.n || a.lift.size() != b.lift.size()) throw InvalidInput("projective_distance: curves sampled differently");
  double d = 0.0;
  for (std::size_t j = 0; j < a.lift.size(); ++j) d = std::max(d, projective_distance(a.lift[j], b.lift[j]));
  return d;
}

double self_duality_residual(const ProjectiveCurve& curve, const Eigen::MatrixXd& form) {
  const auto dual = dual_curve(curve);
  const Eigen::MatrixXd inverse = form.inverse();
  double d = 0.0;
  for (std::size_t j = 0; j < curve.lift.size(); ++j)
    d = std::max(d, projective_distance(dual.lift[j], inverse * curve.lift[j]));
  return d;
}

WindingLift winding_lift_n2(const ProjectiveCurve& curve) {
  if (curve.n != 2) throw Unsupported("winding_lift_n2: universal-cover lift is implemented for n = 2 only");
  double angle = 0.0;
  for (std::size_t j = 1; j < curve.lift.size(); ++j) {
    const auto& a = curve.lift[j - 1];
    const auto& b = curve.lift[j];
    angle += std::atan2(a(0) * b(1) - a(1) * b(0), a.dot(b));
  }
  WindingLift out;
  out.monodromy = curve.monodromy;
  out.angle = angle;
  const double turns = std::floor(std::abs(angle) / std::numbers::pi + 1e-9);
  out.winding = static_cast<int>(angle < 0.0 ? -turns : turns);
  return out;
}

ProjectiveCurve act_group(const Eigen::MatrixXd& g, const ProjectiveCurve& curve) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (g.rows() != curve.n || g.cols() != curve.n || !lu.isInvertible()) throw InvalidInput("act_group: g must be invertible of size n");
  ProjectiveCurve out;
  out.n = curve.n;
  for (const auto& v : curve.lift) out.lift.emplace_back(g * v);
  out.monodromy = g * curve.monodromy * lu.inverse();
  if (!curve.detached()) out.jets = std::make_shared<GroupJets>(g, curve.jets);
  return out;
}

ProjectiveCurve act_diffeo(const CircleDiffeo& F, const ProjectiveCurve& curve) {
  const int m = curve.steps();
  ProjectiveCurve out;
  out.n = curve.n;
  out.monodromy = curve.monodromy;
  out.lift.resize(static_cast<std::size_t>(m + 1));
  if (curve.detached()) {
    const auto series = series_of(curve);
    for (int j = 0; j < m; ++j) out.lift[static_cast<std::size_t>(j)] = series.evaluate(F.inverse_at(static_cast<double>(j) / m)).col(0);
  } else {
    for (int j = 0; j < m; ++j)
      out.lift[static_cast<std::size_t>(j)] = curve.jets->taylor(F.inverse_at(static_cast<double>(j) / m), 0).row(0).transpose();
    out.jets = std::make_shared<DiffeoJets>(F, curve.jets, curve.n);
  }
  close_curve(out);
  return out;
}

}  // namespace circlops
