#include "circlops/periodic_function.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "circlops/error.hpp"

namespace circlops {

namespace {

using cplx = std::complex<double>;

// Index helpers into the flat [a0, c1, s1, ...] layout.
constexpr std::size_t cos_index(int k) { return static_cast<std::size_t>(2 * k - 1); }
constexpr std::size_t sin_index(int k) { return static_cast<std::size_t>(2 * k); }

}  // namespace

PeriodicFunction::PeriodicFunction(int band) {
  if (band < 0) throw InvalidInput("PeriodicFunction: negative band limit");
  coeffs_.assign(static_cast<std::size_t>(2 * band + 1), 0.0);
}

PeriodicFunction::PeriodicFunction(int band, std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (band < 0) throw InvalidInput("PeriodicFunction: negative band limit");
  if (coeffs_.size() != static_cast<std::size_t>(2 * band + 1))
    throw InvalidInput("PeriodicFunction: expected 2*band+1 coefficients");
}

PeriodicFunction PeriodicFunction::cosine(int k, double amplitude) {
  if (k == 0) return constant(amplitude);
  PeriodicFunction f(k);
  f.coeffs_[cos_index(k)] = amplitude;
  return f;
}

PeriodicFunction PeriodicFunction::sine(int k, double amplitude) {
  if (k <= 0) throw InvalidInput("PeriodicFunction::sine: frequency must be positive");
  PeriodicFunction f(k);
  f.coeffs_[sin_index(k)] = amplitude;
  return f;
}

PeriodicFunction PeriodicFunction::from_samples(std::span<const double> samples, int band) {
  const auto m = static_cast<long>(samples.size());
  if (2L * band >= m) throw InvalidInput("PeriodicFunction::from_samples: too few samples for band");
  // Exact twiddle table; (k*j) mod M indexes it.
  std::vector<cplx> twiddle(static_cast<std::size_t>(m));
  for (long j = 0; j < m; ++j) {
    const double a = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    twiddle[static_cast<std::size_t>(j)] = {std::cos(a), std::sin(a)};
  }
  PeriodicFunction f(band);
  double mean = 0.0;
  for (double v : samples) mean += v;
  f.coeffs_[0] = mean / static_cast<double>(m);
  for (int k = 1; k <= band; ++k) {
    cplx acc{0.0, 0.0};
    for (long j = 0; j < m; ++j) acc += samples[static_cast<std::size_t>(j)] * twiddle[static_cast<std::size_t>((k * j) % m)];
    f.coeffs_[cos_index(k)] = 2.0 * acc.real() / static_cast<double>(m);
    f.coeffs_[sin_index(k)] = 2.0 * acc.imag() / static_cast<double>(m);
  }
  return f;
}

double PeriodicFunction::cos_coeff(int k) const {
  if (k == 0) return coeffs_[0];
  return k <= band_limit() ? coeffs_[cos_index(k)] : 0.0;
}

double PeriodicFunction::sin_coeff(int k) const {
  return (k >= 1 && k <= band_limit()) ? coeffs_[sin_index(k)] : 0.0;
}

double PeriodicFunction::operator()(double theta) const {
  const int n = band_limit();
  const double a = kTwoPi * (theta - std::floor(theta));
  const cplx z{std::cos(a), std::sin(a)};
  cplx w = z;
  double value = coeffs_[0];
  for (int k = 1; k <= n; ++k) {
    value += coeffs_[cos_index(k)] * w.real() + coeffs_[sin_index(k)] * w.imag();
    w *= z;
    if (k % 32 == 0) w = std::polar(1.0, a * (k + 1));
  }
  return value;
}

std::vector<double> PeriodicFunction::sample(int count, double offset) const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) out[static_cast<std::size_t>(j)] = (*this)((j + offset) / count);
  return out;
}

PeriodicFunction PeriodicFunction::derivative(int order) const {
  PeriodicFunction d = *this;
  for (int step = 0; step < order; ++step) {
    d.coeffs_[0] = 0.0;
    for (int k = 1; k <= band_limit(); ++k) {
      const double w = kTwoPi * k;
      const double c = d.coeffs_[cos_index(k)];
      const double s = d.coeffs_[sin_index(k)];
      d.coeffs_[cos_index(k)] = w * s;
      d.coeffs_[sin_index(k)] = -w * c;
    }
  }
  return d;
}

PeriodicFunction PeriodicFunction::antiderivative() const {
  PeriodicFunction f(band_limit());
  for (int k = 1; k <= band_limit(); ++k) {
    const double w = kTwoPi * k;
    f.coeffs_[cos_index(k)] = -coeffs_[sin_index(k)] / w;
    f.coeffs_[sin_index(k)] = coeffs_[cos_index(k)] / w;
  }
  return f;
}

PeriodicFunction PeriodicFunction::truncated(int band) const {
  PeriodicFunction f(band);
  const std::size_t keep = std::min(coeffs_.size(), f.coeffs_.size());
  std::copy_n(coeffs_.begin(), keep, f.coeffs_.begin());
  return f;
}

double PeriodicFunction::truncation_residual(int band) const {
  double r = 0.0;
  for (std::size_t i = static_cast<std::size_t>(2 * band + 1); i < coeffs_.size(); ++i) r += std::abs(coeffs_[i]);
  return r;
}

double PeriodicFunction::sup_norm() const {
  const int count = 16 * (band_limit() + 1);
  double best = 0.0;
  for (double v : sample(count)) best = std::max(best, std::abs(v));
  return best;
}

double PeriodicFunction::coefficient_norm() const {
  double r = 0.0;
  for (double c : coeffs_) r += std::abs(c);
  return r;
}

bool PeriodicFunction::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

PeriodicFunction& PeriodicFunction::operator+=(const PeriodicFunction& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

PeriodicFunction& PeriodicFunction::operator-=(const PeriodicFunction& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

PeriodicFunction& PeriodicFunction::operator*=(double scale) {
  for (double& c : coeffs_) c *= scale;
  return *this;
}

PeriodicFunction operator*(const PeriodicFunction& a, const PeriodicFunction& b) {
  // Complex exponential form: F_k = (c_k - i s_k)/2 for k > 0, F_{-k} = conj(F_k).
  const int na = a.band_limit();
  const int nb = b.band_limit();
  auto to_complex = [](const PeriodicFunction& f) {
    const int n = f.band_limit();
    std::vector<cplx> z(static_cast<std::size_t>(2 * n + 1));
    z[static_cast<std::size_t>(n)] = f.mean();
    for (int k = 1; k <= n; ++k) {
      const cplx v{0.5 * f.cos_coeff(k), -0.5 * f.sin_coeff(k)};
      z[static_cast<std::size_t>(n + k)] = v;
      z[static_cast<std::size_t>(n - k)] = std::conj(v);
    }
    return z;
  };
  const auto za = to_complex(a);
  const auto zb = to_complex(b);
  const int n = na + nb;
  PeriodicFunction out(n);
  for (int k = 0; k <= n; ++k) {
    cplx acc{0.0, 0.0};
    const int lo = std::max(-na, k - nb);
    const int hi = std::min(na, k + nb);
    for (int i = lo; i <= hi; ++i)
      acc += za[static_cast<std::size_t>(i + na)] * zb[static_cast<std::size_t>(k - i + nb)];
    if (k == 0) {
      out.coeffs_[0] = acc.real();
    } else {
      out.coeffs_[cos_index(k)] = 2.0 * acc.real();
      out.coeffs_[sin_index(k)] = -2.0 * acc.imag();
    }
  }
  return out;
}

PeriodicFunction multiply(const PeriodicFunction& f, const PeriodicFunction& g) { return f * g; }
PeriodicFunction derivative(const PeriodicFunction& f) { return f.derivative(); }
double integrate_circle(const PeriodicFunction& f) { return f.integral(); }
double distance(const PeriodicFunction& f, const PeriodicFunction& g) { return (f - g).sup_norm(); }

}  // namespace circlops
