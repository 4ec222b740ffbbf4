#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "gclkit/gcl.hpp"
#include "gclkit/metrics.hpp"
#include "gclkit/verify.hpp"

using namespace gclkit;
using std::numbers::pi;

namespace {

Hex unit_cube() {
  return {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{1, 1, 0}, Vec3{0, 1, 0},
          Vec3{0, 0, 1}, Vec3{1, 0, 1}, Vec3{1, 1, 1}, Vec3{0, 1, 1}};
}

const HexMesh& study_mesh() {
  static const HexMesh m = build_box_mesh(10, 10, 10, 3.2, 2.8, 2.4);
  return m;
}

}  // namespace

TEST(ParseMethod, RoundTrip) {
  for (IfmvMethod m : {IfmvMethod::NlfdLvi, IfmvMethod::NlfdAevi, IfmvMethod::Avg, IfmvMethod::TriMap,
                       IfmvMethod::TsLvi, IfmvMethod::TsAevi, IfmvMethod::Zero})
    EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("simpson"), ConfigError);
}

TEST(FaceIfmv, StaticAndTopFace) {
  const Hex r = unit_cube();
  Hex v{};
  for (double g : ifmv_trimap(r, v)) EXPECT_EQ(g, 0.0);
  // top face (5678) moving up at unit speed: G = +1 on it, 0 elsewhere
  for (int a = 4; a < 8; ++a) v[a] = {0, 0, 1};
  const auto g = ifmv_trimap(r, v);
  EXPECT_NEAR(g[1], 1.0, 1e-15);
  for (int m : {0, 2, 3, 4, 5}) EXPECT_NEAR(g[m], 0.0, 1e-15);
  Hex vb{};
  for (int a = 0; a < 4; ++a) vb[a] = {0, 0, 1};
  EXPECT_NEAR(ifmv_trimap(r, vb)[0], -1.0, 1e-15);
}

TEST(FaceIfmv, RigidTranslationIsVelocityDotArea) {
  std::mt19937_64 g(1);
  for (int i = 0; i < 100; ++i) {
    const Hex r = random_hex(g);
    const Vec3 c{unit_uniform(g) - 0.5, unit_uniform(g) - 0.5, unit_uniform(g) - 0.5};
    Hex v;
    v.fill(c);
    const auto f = ifmv_trimap(r, v);
    const auto s = face_area_vectors(r);
    for (int m = 0; m < 6; ++m) EXPECT_NEAR(f[m], dot(c, s[m]), 1e-14);
  }
}

TEST(FaceIfmv, TrilinearClosure) {
  EXPECT_LE(trilinear_closure_error(1000, 5), 1e-13);
  // the suite must notice a dropped cofactor term
  EXPECT_GT(trilinear_closure_error(1000, 5, Mutation::TrimapCofactor), 1e-6);
}

TEST(Dvoldt, UniformScaling) {
  // r(t) = s(t) r0 gives dV/dt = 3 s^2 sdot V0
  const Hex r0 = unit_cube();
  const double V0 = 1.0;
  for (double t : {0.1, 0.4, 0.75}) {
    const double s = 1 + 0.2 * std::sin(2 * pi * t), sd = 0.2 * 2 * pi * std::cos(2 * pi * t);
    Hex r, v;
    for (int a = 0; a < 8; ++a) {
      r[a] = s * r0[a];
      v[a] = sd * r0[a];
    }
    EXPECT_NEAR(dvoldt_trimap(r, v), 3 * s * s * sd * V0, 1e-13);
    const auto g = ifmv_trimap(r, v);
    double sum = 0;
    for (double x : g) sum += x;
    EXPECT_NEAR(sum, 3 * s * s * sd * V0, 1e-13);
  }
}

TEST(Dvoldt, MatchesFiniteDifferenceOfVolume) {
  std::mt19937_64 g(2);
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const Hex r = random_hex(g), v = random_velocities(g);
    Hex rp, rm;
    for (int a = 0; a < 8; ++a) {
      rp[a] = r[a] + h * v[a];
      rm[a] = r[a] - h * v[a];
    }
    EXPECT_NEAR(dvoldt_trimap(r, v), (hex_volume(rp) - hex_volume(rm)) / (2 * h), 1e-7);
  }
}

TEST(Dvoldt, RigidRotationIsZero) {
  std::mt19937_64 g(3);
  const Hex r = random_hex(g);
  const Vec3 om{0.3, -0.7, 0.2};
  Hex v;
  for (int a = 0; a < 8; ++a) v[a] = cross(om, r[a]);
  EXPECT_NEAR(dvoldt_trimap(r, v), 0.0, 1e-13);
}

TEST(Sweep, NormalTranslation) {
  const Face a{Vec3{0, 0, 0}, Vec3{2, 0, 0}, Vec3{2, 1, 0}, Vec3{0, 1, 0}};  // area vector +2 z
  Face b = a;
  for (auto& p : b) p += Vec3{0.1, 0.2, 0.3};
  EXPECT_NEAR(sweep_volume(a, b), 0.6, 1e-15);
  EXPECT_NEAR(sweep_volume_direction(a, b, 2), 0.6, 1e-15);
  EXPECT_NEAR(sweep_volume_direction(a, b, 0), 0.0, 1e-15);
  EXPECT_EQ(sweep_volume(a, a), 0.0);
}

TEST(Sweep, DirectionalPartsSumToTotal) {
  std::mt19937_64 g(4);
  for (int i = 0; i < 200; ++i) {
    const Hex r = random_hex(g), s = random_hex(g, 0.1);
    for (int m = 0; m < 6; ++m) {
      const Face a = face_of(r, m);
      Face b = face_of(s, m);
      for (int q = 0; q < 4; ++q) b[q] = a[q] + 0.3 * (b[q] - a[q]);
      const double total = sweep_volume(a, b);
      const double parts = sweep_volume_direction(a, b, 0) + sweep_volume_direction(a, b, 1) +
                           sweep_volume_direction(a, b, 2);
      ASSERT_NEAR(parts, total, 1e-13);
    }
  }
}

TEST(Increments, StartAtZeroAndAgreeOnCase1) {
  const auto& m = study_mesh();
  const auto tr = sample_motion(m, MotionCase{CaseId::Case1}, 3);
  const auto lvi = lvi_increments(m, tr), aevi = aevi_increments(m, tr);
  for (std::size_t c = 0; c < m.cell_count(); c += 13)
    for (int f = 0; f < 6; ++f) {
      EXPECT_EQ(lvi.perFace.at(0, c, f), 0.0);
      EXPECT_EQ(aevi.perFace.at(0, c, f), 0.0);
    }
  double diff = 0;
  for (std::size_t i = 0; i < lvi.perFace.data.size(); ++i)
    diff = std::fmax(diff, std::fabs(lvi.perFace.data[i] - aevi.perFace.data[i]));
  EXPECT_LE(diff, 1e-13);
}

TEST(Increments, ClosedMotionHasNoLviSlope) {
  const auto& m = study_mesh();
  const auto tr = sample_motion(m, MotionCase{CaseId::Case3}, 2);
  const auto s = extracted(lvi_increments(m, tr), tr);
  for (double x : s.linearSlope) ASSERT_EQ(x, 0.0);
}

TEST(Increments, Case3AeviSlopeApproachesSweptCircle) {
  const auto& m = study_mesh();
  const auto tr = sample_motion(m, MotionCase{CaseId::Case3}, 20);
  const auto s = extracted(aevi_increments(m, tr), tr);
  const std::size_t cell = m.cell_id(0, 0, 5);
  const double exact = 0.24 * pi * 0.05 * 0.05;
  EXPECT_NEAR(s.linearSlope[cell * 6 + 5], exact, 0.01 * exact);
}

TEST(Extraction, LinearPlusSine) {
  // hand-built increment series a t + b sin(2 pi t) on one face
  IncrementSeries s;
  s.N = 2;
  s.T = 1.0;
  const int nts = 5;
  s.perFace = FaceSeries(1, nts + 1);
  std::vector<double> inst(nts + 1);
  for (int n = 0; n <= nts; ++n) {
    inst[n] = n == nts ? 1.0 : n / double(nts);
    s.perFace.at(n, 0, 2) = 0.7 * inst[n] + 0.2 * std::sin(2 * pi * inst[n]);
  }
  extract_linear_and_periodic(s, inst);
  EXPECT_NEAR(s.linearSlope[2], 0.7, 1e-15);
  const SpectralOperator op(2);
  const auto a = ifmv_nlfd(s, op), b = ifmv_ts(s, op);
  for (int n = 0; n < nts; ++n) {
    const double ex = 0.7 + 0.2 * 2 * pi * std::cos(2 * pi * inst[n]);
    EXPECT_NEAR(a.at(n, 0, 2), ex, 1e-13);
    EXPECT_NEAR(b.at(n, 0, 2), ex, 1e-13);
    EXPECT_EQ(a.at(n, 0, 0), 0.0);
  }
  IncrementSeries raw;
  EXPECT_THROW(ifmv_nlfd(raw, op), ConfigError);
}

TEST(Ifmv, GclByConstructionForIncrementMethods) {
  const auto& m = study_mesh();
  for (CaseId id : {CaseId::Case2, CaseId::Case4, CaseId::Case5}) {
    const auto tr = sample_motion(m, MotionCase{id}, 3);
    const SpectralOperator op(3);
    const auto vol = volume_samples(m, tr);
    for (IfmvMethod meth : {IfmvMethod::NlfdLvi, IfmvMethod::NlfdAevi, IfmvMethod::TsLvi, IfmvMethod::TsAevi})
      EXPECT_LE(abs_err_sum_vs_dvoldt(compute_ifmv(m, tr, op, meth).total, vol, op), 1e-12)
          << to_string(id) << " " << to_string(meth);
  }
}

TEST(Ifmv, DirectionalSplitSumsToTotal) {
  const auto& m = study_mesh();
  const auto tr = sample_motion(m, MotionCase{CaseId::Case5}, 2);
  const SpectralOperator op(2);
  for (IfmvMethod meth : {IfmvMethod::NlfdLvi, IfmvMethod::NlfdAevi, IfmvMethod::Avg, IfmvMethod::TriMap}) {
    const auto f = compute_ifmv(m, tr, op, meth, true);
    ASSERT_TRUE(f.has_directions());
    double e = 0;
    for (std::size_t i = 0; i < f.total.data.size(); ++i)
      e = std::fmax(e, std::fabs(f.byDirection[0].data[i] + f.byDirection[1].data[i] + f.byDirection[2].data[i] -
                                 f.total.data[i]));
    EXPECT_LE(e, 1e-13) << to_string(meth);
  }
}

TEST(Ifmv, AvgMatchesTrimapForRigidTranslation) {
  const auto& m = study_mesh();
  const auto tr = sample_motion(m, MotionCase{CaseId::RigidTranslation}, 1);
  const SpectralOperator op(1);
  const auto a = compute_ifmv(m, tr, op, IfmvMethod::Avg), b = compute_ifmv(m, tr, op, IfmvMethod::TriMap);
  for (std::size_t i = 0; i < a.total.data.size(); ++i) ASSERT_NEAR(a.total.data[i], b.total.data[i], 1e-15);
}

TEST(Ifmv, ZeroMethodIsZero) {
  const auto& m = study_mesh();
  const auto tr = sample_motion(m, MotionCase{CaseId::Case2}, 1);
  const auto f = compute_ifmv(m, tr, SpectralOperator(1), IfmvMethod::Zero);
  for (double x : f.total.data) ASSERT_EQ(x, 0.0);
  EXPECT_THROW(compute_ifmv(m, tr, SpectralOperator(2), IfmvMethod::Zero), ConfigError);
}
