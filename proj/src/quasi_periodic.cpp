#include "circlops/quasi_periodic.hpp"

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <complex>

#include "circlops/error.hpp"
#include "circlops/linalg.hpp"
#include "circlops/periodic_function.hpp"

namespace circlops {

namespace {

using cplx = std::complex<double>;

double binomial(int n, int k) {
  double r = 1.0;
  for (int m = 1; m <= k; ++m) r = r * (n - k + m) / m;
  return r;
}

// exp(s·Z) for s = j/M, j = 0..M-1. Each entry is computed directly:
// stepped products leave periodic rounding patterns that show up as spurious modes.
std::vector<Eigen::MatrixXcd> exp_ladder(const Eigen::MatrixXcd& z, int m, double sign) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) out.emplace_back((z * cplx(sign * j / m, 0.0)).exp());
  return out;
}

}  // namespace

QuasiPeriodicSeries::QuasiPeriodicSeries(const std::vector<Eigen::MatrixXd>& samples, const Eigen::MatrixXd& h) {
  m_ = static_cast<int>(samples.size());
  if (m_ < 16) throw InvalidInput("QuasiPeriodicSeries: too few samples");
  rows_ = static_cast<int>(samples.front().rows());
  cols_ = static_cast<int>(samples.front().cols());
  if (h.rows() != rows_ || h.cols() != rows_) throw InvalidInput("QuasiPeriodicSeries: monodromy shape mismatch");
  log_ = matrix_log(h);

  const auto inverse = exp_ladder(log_, m_, -1.0);
  std::vector<std::vector<cplx>> spectra(static_cast<std::size_t>(rows_ * cols_));
  {
    std::vector<std::vector<cplx>> series(spectra.size(), std::vector<cplx>(static_cast<std::size_t>(m_)));
    for (int j = 0; j < m_; ++j) {
      const Eigen::MatrixXcd p = inverse[static_cast<std::size_t>(j)] * samples[static_cast<std::size_t>(j)].cast<cplx>();
      for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) series[static_cast<std::size_t>(r * cols_ + c)][static_cast<std::size_t>(j)] = p(r, c);
    }
    Eigen::FFT<double> fft;
    for (std::size_t e = 0; e < spectra.size(); ++e) {
      fft.fwd(spectra[e], series[e]);
      for (auto& v : spectra[e]) v /= static_cast<double>(m_);
    }
  }

  const int half = m_ / 2;
  std::vector<double> magnitude(static_cast<std::size_t>(half), 0.0);
  for (int k = 0; k < half; ++k)
    for (const auto& s : spectra) {
      const double up = std::abs(s[static_cast<std::size_t>(k)]);
      const double down = std::abs(s[static_cast<std::size_t>((m_ - k) % m_)]);
      magnitude[static_cast<std::size_t>(k)] = std::max({magnitude[static_cast<std::size_t>(k)], up, down});
    }
  const double peak = *std::max_element(magnitude.begin(), magnitude.end());
  std::vector<double> tail(magnitude.begin() + half / 2, magnitude.end());
  std::nth_element(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(tail.size() / 2), tail.end());
  const double noise = tail[tail.size() / 2];
  const double threshold = std::max(1e-15 * peak, 10.0 * noise);
  cutoff_ = 0;
  for (int k = half - 1; k > 0; --k)
    if (magnitude[static_cast<std::size_t>(k)] > threshold) {
      cutoff_ = k;
      break;
    }

  modes_.assign(static_cast<std::size_t>(2 * cutoff_ + 1), Eigen::MatrixXcd::Zero(rows_, cols_));
  for (int k = -cutoff_; k <= cutoff_; ++k) {
    auto& mode = modes_[static_cast<std::size_t>(k + cutoff_)];
    const auto idx = static_cast<std::size_t>((k + m_) % m_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) mode(r, c) = spectra[static_cast<std::size_t>(r * cols_ + c)][idx];
  }
}

Eigen::MatrixXcd QuasiPeriodicSeries::periodic_derivative(double t, int order) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows_, cols_);
  for (int k = -cutoff_; k <= cutoff_; ++k) {
    const cplx factor = std::pow(cplx(0.0, kTwoPi * k), order) * std::polar(1.0, kTwoPi * k * t);
    out += factor * modes_[static_cast<std::size_t>(k + cutoff_)];
  }
  return out;
}

std::vector<Eigen::MatrixXd> QuasiPeriodicSeries::derivative_samples(int order) const {
  // Periodic-part derivatives on the grid by inverse FFT.
  std::vector<std::vector<Eigen::MatrixXcd>> periodic(static_cast<std::size_t>(order + 1),
                                                      std::vector<Eigen::MatrixXcd>(static_cast<std::size_t>(m_), Eigen::MatrixXcd(rows_, cols_)));
  Eigen::FFT<double> fft;
  std::vector<cplx> spectrum(static_cast<std::size_t>(m_)), values;
  for (int r = 0; r <= order; ++r)
    for (int a = 0; a < rows_; ++a)
      for (int b = 0; b < cols_; ++b) {
        std::fill(spectrum.begin(), spectrum.end(), cplx(0.0, 0.0));
        for (int k = -cutoff_; k <= cutoff_; ++k)
          spectrum[static_cast<std::size_t>((k + m_) % m_)] =
              std::pow(cplx(0.0, kTwoPi * k), r) * modes_[static_cast<std::size_t>(k + cutoff_)](a, b) * static_cast<double>(m_);
        fft.inv(values, spectrum);
        for (int j = 0; j < m_; ++j) periodic[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)](a, b) = values[static_cast<std::size_t>(j)];
      }

  const auto forward = exp_ladder(log_, m_, 1.0);
  std::vector<Eigen::MatrixXcd> zpow{Eigen::MatrixXcd::Identity(rows_, rows_)};
  for (int i = 1; i <= order; ++i) zpow.push_back(zpow.back() * log_);
  std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(m_));
  for (int j = 0; j < m_; ++j) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows_, cols_);
    for (int i = 0; i <= order; ++i)
      acc += binomial(order, i) * (zpow[static_cast<std::size_t>(i)] * periodic[static_cast<std::size_t>(order - i)][static_cast<std::size_t>(j)]);
    out[static_cast<std::size_t>(j)] = (forward[static_cast<std::size_t>(j)] * acc).real();
  }
  return out;
}

Eigen::MatrixXd QuasiPeriodicSeries::evaluate(double t, int order) const {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows_, cols_);
  Eigen::MatrixXcd zpow = Eigen::MatrixXcd::Identity(rows_, rows_);
  for (int i = 0; i <= order; ++i) {
    if (i > 0) zpow = zpow * log_;
    acc += binomial(order, i) * (zpow * periodic_derivative(t, order - i));
  }
  const Eigen::MatrixXcd e = (log_ * cplx(t, 0.0)).exp();
  return (e * acc).real();
}

}  // namespace circlops
