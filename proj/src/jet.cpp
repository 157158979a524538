#include "circlops/jet.hpp"

#include <cmath>

namespace circlops {

Jet jet_multiply(const Jet& a, const Jet& b) {
  Jet c(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// u^r for u_0 > 0, from w'u = r u'w.
Jet jet_power(const Jet& u, double r) {
  Jet w(u.size(), 0.0);
  w[0] = std::pow(u[0], r);
  for (std::size_t k = 1; k < u.size(); ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += (r * static_cast<double>(j) - static_cast<double>(k - j)) * u[j] * w[k - j];
    w[k] = acc / (static_cast<double>(k) * u[0]);
  }
  return w;
}

// g∘u given the derivatives g^{(m)}(u_0), m = 0..order.
Jet jet_compose(const std::vector<double>& g_derivs, const Jet& u) {
  Jet out(u.size(), 0.0);
  Jet delta = u;
  delta[0] = 0.0;
  Jet power(u.size(), 0.0);
  power[0] = 1.0;
  double factorial = 1.0;
  for (std::size_t m = 0; m < u.size(); ++m) {
    if (m > 0) {
      power = jet_multiply(power, delta);
      factorial *= static_cast<double>(m);
    }
    for (std::size_t k = 0; k < u.size(); ++k) out[k] += g_derivs[m] / factorial * power[k];
  }
  return out;
}

// Series reversion: the jet of F⁻¹ at F(x) from the jet of F at x.
Jet jet_inverse(const Jet& f, double base) {
  const std::size_t size = f.size();
  Jet t = f;
  t[0] = 0.0;
  Jet u(size, 0.0);
  u[1] = 1.0 / t[1];
  for (std::size_t m = 2; m < size; ++m) {
    // Coefficient of s^m in T(U(s)) with u_m = 0.
    Jet power = u;
    double coeff = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
      if (k > 1) power = jet_multiply(power, u);
      coeff += t[k] * power[m];
    }
    u[m] = -coeff / t[1];
  }
  u[0] = base;
  return u;
}

Jet jet_determinant(const std::vector<std::vector<Jet>>& entries) {
  const std::size_t n = entries.size();
  if (n == 1) return entries[0][0];
  Jet total(entries[0][0].size(), 0.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<std::vector<Jet>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Jet> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(entries[r][c]);
      minor.push_back(std::move(row));
    }
    const Jet term = jet_multiply(entries[0][col], jet_determinant(minor));
    const double sign = col % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += sign * term[k];
  }
  return total;
}

Eigen::MatrixXd taylor_to_derivatives(Eigen::MatrixXd taylor) {
  double factorial = 1.0;
  for (int k = 1; k < taylor.rows(); ++k) {
    factorial *= k;
    taylor.row(k) *= factorial;
  }
  return taylor;
}

}  // namespace circlops
