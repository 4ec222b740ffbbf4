#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gclkit/errors.hpp"

namespace gclkit {

using Complex = std::complex<double>;

/// Fourier collocation on Nts = 2N+1 equally spaced instants t_n = nT/Nts.
/// Coefficients are stored for k = -N..N at index k+N, with 1/Nts on the forward transform.
class SpectralOperator {
 public:
  SpectralOperator(int N, double T = 1.0) : N_(N), nts_(2 * N + 1), T_(T) {
    if (N < 1) throw ConfigError("SpectralOperator: N must be >= 1");
    if (!(T > 0)) throw ConfigError("SpectralOperator: period must be > 0");
    cos_.resize(nts_);
    sin_.resize(nts_);
    for (int j = 0; j < nts_; ++j) {
      const double th = 2.0 * std::numbers::pi * j / nts_;
      cos_[j] = std::cos(th);
      sin_[j] = std::sin(th);
    }
    build_d();
  }

  /// Operator for a given sample count; even counts are rejected.
  static SpectralOperator for_samples(int nts, double T = 1.0) {
    if (nts < 3 || nts % 2 == 0)
      throw ConfigError("SpectralOperator: sample count must be odd and >= 3, got " + std::to_string(nts));
    return SpectralOperator((nts - 1) / 2, T);
  }

  int harmonics() const { return N_; }
  int samples() const { return nts_; }
  double period() const { return T_; }
  double instant(int n) const { return n * T_ / nts_; }
  const Eigen::MatrixXd& d_matrix() const { return D_; }

  std::vector<Complex> dft(std::span<const double> s) const {
    check(s.size());
    std::vector<Complex> c(nts_);
    for (int k = -N_; k <= N_; ++k) {
      Complex acc = 0.0;
      for (int n = 0; n < nts_; ++n) {
        const int j = wrap(k * n);
        acc += s[n] * Complex(cos_[j], -sin_[j]);
      }
      c[k + N_] = acc / static_cast<double>(nts_);
    }
    return c;
  }

  std::vector<Complex> idft_complex(std::span<const Complex> c) const {
    check(c.size());
    std::vector<Complex> s(nts_);
    for (int n = 0; n < nts_; ++n) {
      Complex acc = 0.0;
      for (int k = -N_; k <= N_; ++k) {
        const int j = wrap(k * n);
        acc += c[k + N_] * Complex(cos_[j], sin_[j]);
      }
      s[n] = acc;
    }
    return s;
  }

  /// Real part of the inverse transform.
  std::vector<double> idft(std::span<const Complex> c) const {
    const auto z = idft_complex(c);
    std::vector<double> s(nts_);
    for (int n = 0; n < nts_; ++n) s[n] = z[n].real();
    return s;
  }

  /// idft((i 2 pi k / T) dft(s)).
  std::vector<double> fourier_differentiate(std::span<const double> s) const {
    auto c = dft(s);
    for (int k = -N_; k <= N_; ++k) c[k + N_] *= Complex(0.0, 2.0 * std::numbers::pi * k / T_);
    return idft(c);
  }

  std::vector<double> apply_d(std::span<const double> s) const {
    check(s.size());
    std::vector<double> out(nts_, 0.0);
    for (int n = 0; n < nts_; ++n)
      for (int m = 0; m < nts_; ++m) out[n] += D_(n, m) * s[m];
    return out;
  }

  /// Batched Fourier derivative of real signals stored as data[n * width + j].
  /// If mean is given it replaces the (zero) k = 0 coefficient of the derivative.
  std::vector<double> fourier_differentiate_columns(const std::vector<double>& data, std::size_t width,
                                                    const std::vector<double>* mean = nullptr) const {
    check(data.size() / width);
    std::vector<double> out(data.size(), 0.0);
    std::vector<double> re(N_ + 1), im(N_ + 1);
    for (std::size_t j = 0; j < width; ++j) {
      for (int k = 1; k <= N_; ++k) {
        double a = 0.0, b = 0.0;
        for (int n = 0; n < nts_; ++n) {
          const int q = wrap(k * n);
          const double v = data[n * width + j];
          a += v * cos_[q];
          b -= v * sin_[q];
        }
        // multiply by i w_k
        const double wk = 2.0 * std::numbers::pi * k / T_;
        re[k] = -wk * b / nts_;
        im[k] = wk * a / nts_;
      }
      const double g0 = mean ? (*mean)[j] : 0.0;
      for (int n = 0; n < nts_; ++n) {
        double acc = 0.0;
        for (int k = 1; k <= N_; ++k) {
          const int q = wrap(k * n);
          acc += re[k] * cos_[q] - im[k] * sin_[q];
        }
        out[n * width + j] = g0 + 2.0 * acc;
      }
    }
    return out;
  }

  /// Batched D * data for data[n * width + j].
  std::vector<double> apply_d_columns(const std::vector<double>& data, std::size_t width) const {
    check(data.size() / width);
    std::vector<double> out(data.size(), 0.0);
    for (int n = 0; n < nts_; ++n)
      for (int m = 0; m < nts_; ++m) {
        const double d = D_(n, m);
        if (d == 0.0) continue;
        const double* src = &data[m * width];
        double* dst = &out[n * width];
        for (std::size_t j = 0; j < width; ++j) dst[j] += d * src[j];
      }
    return out;
  }

 private:
  int wrap(int x) const {
    int r = x % nts_;
    return r < 0 ? r + nts_ : r;
  }

  void check(std::size_t n) const {
    if (n % 2 == 0)
      throw ConfigError("spectral: even sample count " + std::to_string(n) + " is not supported");
    if (static_cast<int>(n) != nts_)
      throw ConfigError("spectral: expected " + std::to_string(nts_) + " samples, got " + std::to_string(n));
  }

  void build_d() {
    D_ = Eigen::MatrixXd::Zero(nts_, nts_);
    for (int n = 0; n < nts_; ++n)
      for (int m = n + 1; m < nts_; ++m) {
        const int d = n - m;
        const double sign = (d % 2 == 0) ? 1.0 : -1.0;
        const double v = std::numbers::pi / T_ * sign / std::sin(std::numbers::pi * d / nts_);
        D_(n, m) = v;
        D_(m, n) = -v;
      }
  }

  int N_, nts_;
  double T_;
  std::vector<double> cos_, sin_;
  Eigen::MatrixXd D_;
};

/// Free-function forms. The sample count fixes N; even counts throw.
inline std::vector<Complex> dft(std::span<const double> s, double T = 1.0) {
  return SpectralOperator::for_samples(static_cast<int>(s.size()), T).dft(s);
}

inline std::vector<double> idft(std::span<const Complex> c, double T = 1.0) {
  return SpectralOperator::for_samples(static_cast<int>(c.size()), T).idft(c);
}

inline std::vector<double> fourier_differentiate(std::span<const double> s, double T = 1.0) {
  return SpectralOperator::for_samples(static_cast<int>(s.size()), T).fourier_differentiate(s);
}

inline Eigen::MatrixXd ts_matrix(int N, double T = 1.0) { return SpectralOperator(N, T).d_matrix(); }

/// Max |fourier derivative of volumes - reference| with both stored as [n * width + cell].
inline double volume_derivative_convergence(const SpectralOperator& op, const std::vector<double>& volumes,
                                            std::size_t width, const std::vector<double>& reference) {
  const auto d = op.fourier_differentiate_columns(volumes, width);
  double err = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) err = std::fmax(err, std::fabs(d[i] - reference[i]));
  return err;
}

}  // namespace gclkit
