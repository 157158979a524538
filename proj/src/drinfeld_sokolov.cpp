#include "circlops/drinfeld_sokolov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "circlops/error.hpp"
#include "circlops/linalg.hpp"
#include "circlops/quasi_periodic.hpp"

namespace circlops {

namespace {

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

PeriodicFunction one() { return PeriodicFunction::constant(1.0); }

}  // namespace

MatrixConnection::MatrixConnection(PeriodicMatrix entries, double trace_tol) : entries_(std::move(entries)) {
  if (entries_.size() < 1) throw InvalidInput("MatrixConnection: empty matrix");
  trace_residual_ = entries_.trace().sup_norm();
  if (!(trace_residual_ <= trace_tol))
    throw InvalidInput("MatrixConnection: trace sup-norm " + std::to_string(trace_residual_) + " exceeds tolerance");
}

UnipotentGauge::UnipotentGauge(PeriodicMatrix entries, double tol) : entries_(std::move(entries)) {
  const int n = entries_.size();
  if (n < 1) throw InvalidInput("UnipotentGauge: empty matrix");
  for (int i = 0; i < n; ++i) {
    if (distance(entries_(i, i), one()) > tol) throw InvalidInput("UnipotentGauge: diagonal entry differs from 1");
    for (int j = 0; j < i; ++j)
      if (entries_(i, j).sup_norm() > tol) throw InvalidInput("UnipotentGauge: nonzero entry below the diagonal");
  }
}

UnipotentGauge UnipotentGauge::inverse() const {
  const int n = this->n();
  const PeriodicMatrix nil = PeriodicMatrix::identity(n) - entries_;
  PeriodicMatrix power = PeriodicMatrix::identity(n);
  PeriodicMatrix sum = power;
  for (int k = 1; k < n; ++k) {
    power = power * nil;
    sum += power;
  }
  for (int i = 0; i < n; ++i) sum(i, i) = one();
  return UnipotentGauge(std::move(sum));
}

UnipotentGauge operator*(const UnipotentGauge& a, const UnipotentGauge& b) {
  if (a.n() != b.n()) throw InvalidInput("UnipotentGauge: size mismatch");
  PeriodicMatrix p = a.entries() * b.entries();
  for (int i = 0; i < a.n(); ++i) p(i, i) = one();
  return UnipotentGauge(std::move(p));
}

LevelSetElement::LevelSetElement(MatrixConnection a, double tol) : connection_(std::move(a)) {
  const int n = connection_.n();
  for (int i = 1; i < n; ++i) {
    if (distance(connection_(i, i - 1), one()) > tol) throw InvalidInput("LevelSetElement: subdiagonal entry differs from 1");
    for (int j = 0; j + 1 < i; ++j)
      if (connection_(i, j).sup_norm() > tol) throw InvalidInput("LevelSetElement: nonzero entry below the subdiagonal");
  }
}

PeriodicMatrix psi_project(const MatrixConnection& a) {
  const int n = a.n();
  PeriodicMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) out(i, j) = a(i, j);
  return out;
}

PeriodicMatrix lambda_shift(int n) {
  PeriodicMatrix out(n);
  for (int i = 1; i < n; ++i) out(i, i - 1) = one();
  return out;
}

MatrixConnection gauge_act(const UnipotentGauge& g, const MatrixConnection& a) {
  if (g.n() != a.n()) throw InvalidInput("gauge_act: size mismatch");
  const PeriodicMatrix inv = g.inverse().entries();
  PeriodicMatrix out = g.entries() * a.entries() * inv;
  out -= g.entries().derivative() * inv;
  const int n = a.n();
  // The diagonal of g'g⁻¹ vanishes, so the trace is that of gAg⁻¹ = tr A; rounding
  // in the products is absorbed by the tolerance scaled to the entries.
  const double scale = std::max(1.0, out.sup_norm());
  return MatrixConnection(std::move(out), std::max(kStructureTolerance, 1e-13 * scale * n));
}

LevelSetElement gauge_act(const UnipotentGauge& g, const LevelSetElement& a) {
  return LevelSetElement(gauge_act(g, a.connection()));
}

Reduction ds_reduce_with_gauge(const LevelSetElement& level) {
  const auto& a = level.connection();
  const int n = a.n();
  // P[j][k] = [D^k] P_j, with r_j = P_j(u).
  std::vector<std::vector<PeriodicFunction>> p{{one()}};
  for (int j = 0; j < n; ++j) {
    const auto& pj = p[static_cast<std::size_t>(j)];
    std::vector<PeriodicFunction> q(static_cast<std::size_t>(j + 2));
    for (int k = 0; k <= j; ++k) {
      q[static_cast<std::size_t>(k)] += pj[static_cast<std::size_t>(k)].derivative();
      q[static_cast<std::size_t>(k + 1)] += pj[static_cast<std::size_t>(k)];
    }
    for (int i = 0; i <= j; ++i) {
      if (a(i, j).is_zero()) continue;
      const auto& pi = p[static_cast<std::size_t>(i)];
      for (int k = 0; k <= i; ++k) q[static_cast<std::size_t>(k)] -= a(i, j) * pi[static_cast<std::size_t>(k)];
    }
    q.back() = one();
    p.push_back(std::move(q));
  }
  std::vector<PeriodicFunction> lower(p.back().begin(), p.back().end() - 1);
  PeriodicMatrix g(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k <= j; ++k) g(k, j) = p[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  return {DifferentialOperator::monic(std::move(lower)), UnipotentGauge(std::move(g))};
}

DifferentialOperator ds_reduce(const LevelSetElement& a) { return ds_reduce_with_gauge(a).op; }

LevelSetElement embed_iota(const DifferentialOperator& op, double tol) {
  if (!op.is_monic()) throw InvalidInput("embed_iota: operator is not monic");
  const int n = op.order();
  if (n < 2) throw InvalidInput("embed_iota: order must be >= 2");
  if (op.coefficient(n - 1).sup_norm() > tol) throw InvalidInput("embed_iota: a_{n-1} does not vanish");
  PeriodicMatrix a = lambda_shift(n);
  for (int i = 0; i + 1 < n; ++i) a(i, n - 1) = -op.coefficient(i);
  return LevelSetElement(MatrixConnection(std::move(a)));
}

Eigen::MatrixXd holonomy(const MatrixConnection& a, int steps) {
  if (!power_of_two(steps) || steps < 256) throw InvalidInput("holonomy: steps must be a power of two >= 256");
  return rk4_flow(a.entries().sample(2 * steps), steps, FlowSide::Right).back();
}

double QuasiPeriodicPath::quasi_periodicity_residual() const { return (frames.back() - monodromy * frames.front()).norm(); }

QuasiPeriodicPath make_path(std::vector<Eigen::MatrixXd> frames, Eigen::MatrixXd h, double tol) {
  if (frames.size() < 17) throw InvalidInput("make_path: too few samples");
  const auto n = h.rows();
  if (h.cols() != n) throw InvalidInput("make_path: monodromy must be square");
  for (const auto& f : frames)
    if (f.rows() != n || f.cols() != n) throw InvalidInput("make_path: frame size differs from the monodromy size");
  QuasiPeriodicPath path{std::move(frames), std::move(h)};
  const double scale = std::max(1.0, path.frames.back().norm());
  if (path.quasi_periodicity_residual() > tol * scale)
    throw InvalidInput("make_path: quasi-periodicity residual " + std::to_string(path.quasi_periodicity_residual()) + " exceeds tolerance");
  return path;
}

QuasiPeriodicPath path_of_connection(const MatrixConnection& a, const Eigen::MatrixXd& frame0, int steps) {
  if (!power_of_two(steps) || steps < 256) throw InvalidInput("path_of_connection: steps must be a power of two >= 256");
  if (frame0.rows() != a.n() || frame0.cols() != a.n()) throw InvalidInput("path_of_connection: frame size mismatch");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(frame0);
  if (!lu.isInvertible()) throw InvalidInput("path_of_connection: initial frame is singular");
  auto flow = rk4_flow(a.entries().sample(2 * steps), steps, FlowSide::Right);
  for (auto& f : flow) f = frame0 * f;
  Eigen::MatrixXd h = flow.back() * lu.inverse();
  return {std::move(flow), std::move(h)};
}

MatrixConnection connection_of_path(const QuasiPeriodicPath& path, int band) {
  const int m = path.steps();
  if (2 * band >= m) throw InvalidInput("connection_of_path: band too large for the sample count");
  const double scale = std::max(1.0, path.frames.back().norm());
  if (path.quasi_periodicity_residual() > kPathTolerance * scale)
    throw InvalidInput("connection_of_path: quasi-periodicity residual exceeds tolerance");
  const std::vector<Eigen::MatrixXd> samples(path.frames.begin(), path.frames.end() - 1);
  const auto d = QuasiPeriodicSeries(samples, path.monodromy).derivative_samples(1);
  const auto n = static_cast<int>(path.monodromy.rows());
  std::vector<std::vector<double>> values(static_cast<std::size_t>(n * n), std::vector<double>(static_cast<std::size_t>(m)));
  for (int j = 0; j < m; ++j) {
    Eigen::MatrixXd a = samples[static_cast<std::size_t>(j)].fullPivLu().solve(d[static_cast<std::size_t>(j)]);
    a.diagonal().array() -= a.trace() / n;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) values[static_cast<std::size_t>(r * n + c)][static_cast<std::size_t>(j)] = a(r, c);
  }
  PeriodicMatrix out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(r, c) = PeriodicFunction::from_samples(values[static_cast<std::size_t>(r * n + c)], band);
  // Each diagonal projection is linear, so the trace stays at rounding level.
  const double tol = std::max(kStructureTolerance, 1e-13 * std::max(1.0, out.sup_norm()));
  return MatrixConnection(std::move(out), tol);
}

Eigen::MatrixXd monodromy_of_path(const QuasiPeriodicPath& path) { return path.frames.back() * path.frames.front().inverse(); }

LevelSetElement random_level_set(Rng& rng, int n, int band, double amplitude) {
  if (n < 2) throw InvalidInput("random_level_set: n must be >= 2");
  PeriodicMatrix a = lambda_shift(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = random_function(rng, band, amplitude);
  PeriodicFunction mean_diagonal;
  for (int i = 0; i < n; ++i) mean_diagonal += a(i, i);
  mean_diagonal *= 1.0 / n;
  for (int i = 0; i < n; ++i) a(i, i) -= mean_diagonal;
  PeriodicFunction trace = a.trace();
  a(n - 1, n - 1) -= trace;  // exact zero trace after rounding
  return LevelSetElement(MatrixConnection(std::move(a)));
}

UnipotentGauge random_gauge(Rng& rng, int n, int band, double amplitude) {
  PeriodicMatrix g = PeriodicMatrix::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g(i, j) = random_function(rng, band, amplitude);
  return UnipotentGauge(std::move(g));
}

}  // namespace circlops
