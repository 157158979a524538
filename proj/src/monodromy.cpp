#include "circlops/monodromy.hpp"

#include <algorithm>
#include <cmath>

#include "circlops/error.hpp"
#include "circlops/linalg.hpp"

namespace circlops {

namespace {

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

std::vector<Eigen::MatrixXd> jet_samples(const DifferentialOperator& op, int count) {
  const int n = op.order();
  std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(count), Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    const auto values = op.coefficient(i).sample(count);
    for (int t = 0; t < count; ++t) {
      auto& c = out[static_cast<std::size_t>(t)];
      c(n - 1, i) = -values[static_cast<std::size_t>(t)];
      if (i + 1 < n) c(i, i + 1) = 1.0;
    }
  }
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int m = 1; m <= k; ++m) r = r * (n - k + m) / m;
  return r;
}

}  // namespace

PeriodicMatrix jet_system(const DifferentialOperator& op) {
  if (!op.is_monic()) throw InvalidInput("jet_system: operator is not monic");
  const int n = op.order();
  PeriodicMatrix c(n);
  for (int i = 0; i + 1 < n; ++i) c(i, i + 1) = PeriodicFunction::constant(1.0);
  for (int i = 0; i < n; ++i) c(n - 1, i) = -op.coefficient(i);
  return c;
}

FundamentalSolution integrate_fundamental(const DifferentialOperator& op, int steps) {
  if (!power_of_two(steps) || steps < 256) throw InvalidInput("integrate_fundamental: steps must be a power of two >= 256");
  if (!op.is_monic() || op.order() < 1) throw InvalidInput("integrate_fundamental: operator must be monic of order >= 1");
  const auto samples = jet_samples(op, 2 * steps);
  FundamentalSolution phi;
  phi.n = op.order();
  phi.steps = steps;
  phi.frames = rk4_flow(samples, steps, FlowSide::Left);
  const auto coarse = rk4_flow(samples, steps / 2, FlowSide::Left);
  phi.error_estimate = (phi.end() - coarse.back()).norm() / 15.0;
  phi.flagged = phi.error_estimate > kIntegrationFlag;
  return phi;
}

Eigen::MatrixXd monodromy(const FundamentalSolution& phi) { return phi.end(); }

Eigen::MatrixXd monodromy(const DifferentialOperator& op, int steps) { return integrate_fundamental(op, steps).end(); }

std::vector<double> wronskian(const FundamentalSolution& phi) {
  std::vector<double> w;
  w.reserve(phi.frames.size());
  for (const auto& f : phi.frames) w.push_back(f.determinant());
  return w;
}

double liouville_residual(const DifferentialOperator& op, const FundamentalSolution& phi) {
  const auto w = wronskian(phi);
  const int m = phi.steps;
  for (double v : w)
    if (!(std::abs(v) > 0.0)) throw ComputationFailure("liouville_residual: singular fundamental matrix");
  const double kappa = std::log(std::abs(w.back())) - std::log(std::abs(w.front()));
  std::vector<double> periodic(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) periodic[static_cast<std::size_t>(j)] = std::log(std::abs(w[static_cast<std::size_t>(j)])) - kappa * phi.time(j);
  const int band = std::min(m / 8, 4 * op.band_limit() + 32);
  const auto slope = PeriodicFunction::from_samples(periodic, band).derivative().sample(m);
  const auto a = op.coefficient(op.order() - 1).sample(m);
  double residual = 0.0;
  for (int j = 0; j < m; ++j) {
    const auto js = static_cast<std::size_t>(j);
    const double dw = w[js] * (kappa + slope[js]);
    residual = std::max(residual, std::abs(dw + a[js] * w[js]));
  }
  return residual;
}

double step_halving_ratio(const DifferentialOperator& op, int base_steps) {
  const auto samples = jet_samples(op, 8 * base_steps);
  const Eigen::MatrixXd m1 = rk4_flow(samples, base_steps, FlowSide::Left).back();
  const Eigen::MatrixXd m2 = rk4_flow(samples, 2 * base_steps, FlowSide::Left).back();
  const Eigen::MatrixXd m4 = rk4_flow(samples, 4 * base_steps, FlowSide::Left).back();
  return (m2 - m1).norm() / (m4 - m2).norm();
}

PeriodicMatrix concomitant_field(const DifferentialOperator& op) {
  const int n = op.order();
  PeriodicMatrix b(n);
  for (int i = 1; i <= n; ++i) {
    const auto& a = op.coefficient(i);
    if (a.is_zero()) continue;
    for (int k = 0; k < i; ++k) {
      const int p = i - 1 - k;
      PeriodicFunction da = a;  // a^{(k-q)}, q from k down to 0
      for (int q = k; q >= 0; --q) {
        b(p, q) += ((k % 2 == 0 ? 1.0 : -1.0) * binomial(k, q)) * da;
        da = da.derivative();
      }
    }
  }
  return b;
}

ConcomitantForm concomitant(const DifferentialOperator& op, double tol) {
  const auto adj = formal_adjoint(op);
  const double self = coefficient_distance(op, adj);
  double skew = 0.0;
  for (int i = 0; i <= op.order(); ++i) skew = std::max(skew, (op.coefficient(i) + adj.coefficient(i)).sup_norm());
  ConcomitantForm form;
  form.n = op.order();
  if (self <= tol) {
    form.kind = FormKind::Antisymmetric;
  } else if (skew <= tol) {
    form.kind = FormKind::Symmetric;
  } else {
    throw InvalidInput("concomitant: operator is neither self- nor skew-adjoint");
  }
  form.matrix = concomitant_field(op).evaluate(0.0);
  const Eigen::MatrixXd t = form.matrix.transpose();
  form.symmetry_residual = form.kind == FormKind::Antisymmetric ? (form.matrix + t).norm() : (form.matrix - t).norm();
  return form;
}

double concomitant_drift(const DifferentialOperator& op, const FundamentalSolution& phi) {
  const auto b = concomitant_field(op).sample(phi.steps);
  const Eigen::MatrixXd& b0 = b.front();
  double drift = 0.0;
  for (int j = 0; j <= phi.steps; ++j) {
    const auto& f = phi.frames[static_cast<std::size_t>(j)];
    const auto& bj = b[static_cast<std::size_t>(j % phi.steps)];
    drift = std::max(drift, (f.transpose() * bj * f - b0).norm());
  }
  return drift;
}

GroupCertificate certify_group(const DifferentialOperator& op, GroupClass g, int steps, double tol, double membership_tol) {
  const auto membership = is_in_class(op, g, membership_tol);
  if (!membership.member)
    throw InvalidInput("certify_group: operator is not in the " + std::string(to_string(g)) + " class (residual " +
                       std::to_string(membership.residual) + ")");
  const Eigen::MatrixXd m = monodromy(op, steps);
  GroupCertificate cert;
  cert.group = g;
  cert.det_residual = std::abs(m.determinant() - 1.0);
  if (g != GroupClass::PSL) {
    const Eigen::MatrixXd b = concomitant(op, 100.0 * membership_tol).matrix;
    cert.form_residual = (m.transpose() * b * m - b).norm();
  }
  switch (g) {
    case GroupClass::PSL: cert.residual = cert.det_residual; break;
    case GroupClass::PSp: cert.residual = cert.form_residual; break;
    case GroupClass::PSO: cert.residual = std::max(cert.form_residual, cert.det_residual); break;
  }
  cert.pass = cert.residual <= tol;
  return cert;
}

}  // namespace circlops
