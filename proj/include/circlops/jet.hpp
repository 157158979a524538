#pragma once

#include <Eigen/Dense>
#include <vector>

namespace circlops {

/// Truncated Taylor coefficients t_k = g^{(k)}(x)/k!, k = 0..size-1.
using Jet = std::vector<double>;

Jet jet_multiply(const Jet& a, const Jet& b);
/// u^r; requires u_0 > 0.
Jet jet_power(const Jet& u, double r);
/// g∘u given g^{(m)}(u_0), m = 0..u.size()-1.
Jet jet_compose(const std::vector<double>& g_derivs, const Jet& u);
/// Series reversion: the jet of F⁻¹ at F(x) from the jet f of F at x; `base` is x.
Jet jet_inverse(const Jet& f, double base);
/// Determinant of a square array of jets (cofactor expansion; n ≤ 6 intended).
Jet jet_determinant(const std::vector<std::vector<Jet>>& entries);

/// Taylor rows of a vector-valued function: row k = g^{(k)}(x)/k!.
/// Converts to plain derivative rows by multiplying row k by k!.
Eigen::MatrixXd taylor_to_derivatives(Eigen::MatrixXd taylor);

}  // namespace circlops
