#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "gclkit/gcl.hpp"
#include "gclkit/motion.hpp"
#include "gclkit/spectral.hpp"
#include "gclkit/verify.hpp"

using namespace gclkit;
using std::numbers::pi;

namespace {

std::vector<double> samples(const SpectralOperator& op, double (*f)(double)) {
  std::vector<double> s(op.samples());
  for (int n = 0; n < op.samples(); ++n) s[n] = f(2 * pi * op.instant(n) / op.period());
  return s;
}

}  // namespace

TEST(Dft, ConstantAndCosine) {
  for (int N = 1; N <= 6; ++N) {
    const SpectralOperator op(N);
    std::vector<double> c(op.samples(), 3.5);
    const auto h = op.dft(c);
    for (int k = -N; k <= N; ++k) EXPECT_NEAR(std::abs(h[k + N] - (k == 0 ? 3.5 : 0.0)), 0.0, 1e-14);
    const auto hc = op.dft(samples(op, [](double a) { return std::cos(a); }));
    for (int k = -N; k <= N; ++k)
      EXPECT_NEAR(std::abs(hc[k + N] - (std::abs(k) == 1 ? 0.5 : 0.0)), 0.0, 1e-14) << "N=" << N << " k=" << k;
  }
}

TEST(Dft, ConjugateSymmetryAndRoundTrip) {
  std::mt19937_64 g(1);
  for (int nts = 3; nts <= 41; nts += 2) {
    const auto op = SpectralOperator::for_samples(nts);
    std::vector<double> s(nts);
    for (auto& x : s) x = 2 * unit_uniform(g) - 1;
    const auto c = op.dft(s);
    const int N = op.harmonics();
    for (int k = 1; k <= N; ++k) EXPECT_NEAR(std::abs(c[N - k] - std::conj(c[N + k])), 0.0, 1e-15);
    const auto z = op.idft_complex(c);
    for (int n = 0; n < nts; ++n) {
      EXPECT_NEAR(z[n].real(), s[n], 1e-13);
      EXPECT_NEAR(z[n].imag(), 0.0, 1e-13);
    }
  }
}

TEST(Dft, Parseval) {
  std::mt19937_64 g(2);
  for (int nts = 3; nts <= 41; nts += 2) {
    std::vector<double> s(nts);
    double e = 0;
    for (auto& x : s) {
      x = 2 * unit_uniform(g) - 1;
      e += x * x;
    }
    double ec = 0;
    for (const auto& z : dft(s)) ec += std::norm(z);
    EXPECT_NEAR(e / nts, ec, 1e-12 * ec);
  }
}

TEST(Dft, EvenCountsRejected) {
  std::vector<double> s(4, 1.0);
  EXPECT_THROW(dft(s), ConfigError);
  EXPECT_THROW(fourier_differentiate(s), ConfigError);
  EXPECT_THROW(SpectralOperator::for_samples(10), ConfigError);
  EXPECT_THROW(SpectralOperator(0), ConfigError);
}

TEST(FourierDifferentiate, ConstantAndCosine) {
  for (int N = 1; N <= 10; ++N) {
    const SpectralOperator op(N, 2.0);
    std::vector<double> c(op.samples(), -1.25);
    for (double d : op.fourier_differentiate(c)) EXPECT_NEAR(d, 0.0, 1e-13);
    const auto d = op.fourier_differentiate(samples(op, [](double a) { return std::cos(a); }));
    for (int n = 0; n < op.samples(); ++n)
      EXPECT_NEAR(d[n], -(2 * pi / 2.0) * std::sin(2 * pi * op.instant(n) / 2.0), 1e-12);
  }
}

TEST(TsMatrix, SkewZeroDiagonalAndCheckValue) {
  for (int N = 1; N <= 20; ++N) {
    const auto D = ts_matrix(N, 1.0);
    for (int i = 0; i < D.rows(); ++i) {
      EXPECT_EQ(D(i, i), 0.0);
      double row = 0;
      for (int j = 0; j < D.cols(); ++j) {
        EXPECT_EQ(D(i, j), -D(j, i));
        row += D(i, j);
      }
      EXPECT_LE(std::fabs(row), 1e-12);
    }
  }
  EXPECT_NEAR(ts_matrix(1, 1.0)(0, 1), 2 * pi / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(ts_matrix(1, 1.0)(0, 1), 3.6275987, 1e-7);
}

TEST(TsMatrix, DifferentiatesSineAndHarmonics) {
  for (int N = 1; N <= 12; ++N) {
    const SpectralOperator op(N);
    const auto d = op.apply_d(samples(op, [](double a) { return std::sin(a); }));
    for (int n = 0; n < op.samples(); ++n) EXPECT_NEAR(d[n], 2 * pi * std::cos(2 * pi * op.instant(n)), 1e-12);
    // complex exponentials up to the Nyquist harmonic are eigenvectors with eigenvalue i 2 pi k / T
    for (int k = 1; k <= N; ++k) {
      std::vector<double> re(op.samples()), im(op.samples());
      for (int n = 0; n < op.samples(); ++n) {
        re[n] = std::cos(2 * pi * k * op.instant(n));
        im[n] = std::sin(2 * pi * k * op.instant(n));
      }
      const auto dre = op.apply_d(re), dim = op.apply_d(im);
      const double w = 2 * pi * k;
      for (int n = 0; n < op.samples(); ++n) {
        EXPECT_NEAR(dre[n], -w * im[n], 1e-11 * w);
        EXPECT_NEAR(dim[n], w * re[n], 1e-11 * w);
      }
    }
  }
}

TEST(TsMatrix, EquivalentToFourierDifferentiation) {
  std::mt19937_64 g(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int N = 1 + trial % 20;
    const SpectralOperator op(N, 0.5 + unit_uniform(g));
    std::vector<double> s(op.samples());
    for (auto& x : s) x = 2 * unit_uniform(g) - 1;
    const auto a = op.fourier_differentiate(s), b = op.apply_d(s);
    for (int n = 0; n < op.samples(); ++n) ASSERT_NEAR(a[n], b[n], 1e-12);
  }
}

TEST(TsMatrix, BatchedFormsMatchSingleSignal) {
  std::mt19937_64 g(5);
  const SpectralOperator op(4);
  const std::size_t w = 7;
  std::vector<double> data(op.samples() * w), mean(w);
  for (auto& x : data) x = unit_uniform(g);
  for (auto& x : mean) x = unit_uniform(g);
  const auto a = op.fourier_differentiate_columns(data, w, &mean);
  const auto b = op.apply_d_columns(data, w);
  for (std::size_t j = 0; j < w; ++j) {
    std::vector<double> s(op.samples());
    for (int n = 0; n < op.samples(); ++n) s[n] = data[n * w + j];
    const auto d = op.fourier_differentiate(s);
    for (int n = 0; n < op.samples(); ++n) {
      EXPECT_NEAR(a[n * w + j], d[n] + mean[j], 1e-12);
      EXPECT_NEAR(b[n * w + j], d[n], 1e-12);
    }
  }
}

namespace {

double volume_convergence(CaseId id, int N) {
  const auto mesh = build_box_mesh(10, 10, 10, 3.2, 2.8, 2.4);
  const auto tr = sample_motion(mesh, MotionCase{id}, N);
  const SpectralOperator op(N);
  return volume_derivative_convergence(op, volume_samples(mesh, tr), mesh.cell_count(), dvoldt_samples(mesh, tr));
}

}  // namespace

TEST(VolumeDerivativeConvergence, RigidTranslationIsExact) {
  for (int N : {1, 4, 9}) EXPECT_LE(volume_convergence(CaseId::RigidTranslation, N), 1e-13);
}

TEST(VolumeDerivativeConvergence, Case1BandLimited) {
  for (int N = 2; N <= 20; N += 3) EXPECT_LE(volume_convergence(CaseId::Case1, N), 1e-11);
}

TEST(VolumeDerivativeConvergence, Case2Decays) {
  double prev = volume_convergence(CaseId::Case2, 1);
  for (int N = 2; N <= 6; ++N) {
    const double e = volume_convergence(CaseId::Case2, N);
    EXPECT_LE(e, 10 * prev) << "N=" << N;
    prev = std::fmax(e, 1e-14);
  }
  EXPECT_LE(volume_convergence(CaseId::Case2, 8), 1e-12);
}
