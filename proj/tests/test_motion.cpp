#include <gtest/gtest.h>

#include <numbers>

#include "gclkit/motion.hpp"

using namespace gclkit;
using std::numbers::pi;

namespace {

const HexMesh& study_mesh() {
  static const HexMesh m = build_box_mesh(10, 10, 10, 3.2, 2.8, 2.4);
  return m;
}

}  // namespace

TEST(ParseCase, NamesAndErrors) {
  EXPECT_EQ(parse_case("1"), CaseId::Case1);
  EXPECT_EQ(parse_case("case3"), CaseId::Case3);
  EXPECT_EQ(parse_case("5"), CaseId::Case5);
  EXPECT_EQ(parse_case("translation"), CaseId::RigidTranslation);
  EXPECT_EQ(parse_case("rotation"), CaseId::RigidRotation);
  EXPECT_THROW(parse_case("6"), ConfigError);
  EXPECT_THROW(parse_case(""), ConfigError);
}

TEST(Case1, PositionAndVelocity) {
  const auto& m = study_mesh();
  MotionModel model(m, MotionCase{CaseId::Case1});
  const auto v = m.vertex_id(4, 5, 6);
  const Vec3 X = m.vertices[v];
  const auto [p, u] = model.evaluate(0.1);
  const double f = std::sin(pi * X.x / 3.2) * std::sin(pi * X.y / 2.8) * std::sin(pi * X.z / 2.4);
  const double s = std::sin(2 * pi * 0.1), c = 2 * pi * std::cos(2 * pi * 0.1);
  for (int d = 0; d < 3; ++d) {
    EXPECT_NEAR(p[v][d], X[d] + 0.15 * f * s, 1e-15);
    EXPECT_NEAR(u[v][d], 0.15 * f * c, 1e-14);
  }
  const auto b = m.vertex_id(10, 3, 3);
  EXPECT_NEAR(norm(p[b] - m.vertices[b]), 0.0, 1e-15);
}

TEST(Case3, QuarterPeriodPosition) {
  const auto& m = study_mesh();
  MotionModel model(m, MotionCase{CaseId::Case3});
  const auto v = m.vertex_id(4, 5, 6);
  const Vec3 X = m.vertices[v];
  const auto [p, u] = model.evaluate(0.25);
  EXPECT_NEAR(p[v].x, X.x + 0.05, 1e-15);
  EXPECT_NEAR(p[v].y, X.y + 0.05, 1e-15);
  EXPECT_DOUBLE_EQ(p[v].z, X.z);
  EXPECT_NEAR(u[v].x, 2 * pi * 0.05, 1e-14);
  EXPECT_NEAR(u[v].y, 0.0, 1e-14);
  // boundary vertices stay put
  const auto b = m.vertex_id(0, 5, 6);
  EXPECT_EQ(p[b].x, m.vertices[b].x);
  EXPECT_EQ(u[b].y, 0.0);
}

TEST(Motion, PeriodicClosureIsExact) {
  const auto& m = study_mesh();
  for (CaseId id : {CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case4, CaseId::Case5,
                    CaseId::RigidRotation}) {
    const auto tr = sample_motion(m, MotionCase{id}, 2);
    const auto& a = tr.positions.front();
    const auto& b = tr.positions.back();
    EXPECT_EQ(tr.instants.back(), 1.0);
    for (std::size_t v = 0; v < a.size(); ++v) ASSERT_EQ(norm(a[v] - b[v]), 0.0) << to_string(id);
  }
}

TEST(Motion, VelocityMatchesCentredDifference) {
  const auto& m = study_mesh();
  const double h = 1e-5;
  for (CaseId id : {CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case4, CaseId::Case5,
                    CaseId::RigidTranslation, CaseId::RigidRotation}) {
    MotionModel model(m, MotionCase{id});
    for (double t : {0.05, 0.3, 0.61, 0.9}) {
      const auto vel = model.evaluate(t).second;
      const auto pp = model.evaluate(t + h).first, pm = model.evaluate(t - h).first;
      double vmax = 1e-300, err = 0;
      for (std::size_t v = 0; v < vel.size(); ++v) {
        vmax = std::fmax(vmax, max_abs(vel[v]));
        err = std::fmax(err, max_abs((pp[v] - pm[v]) * (0.5 / h) - vel[v]));
      }
      EXPECT_LE(err / vmax, 1e-6) << to_string(id) << " t=" << t;
    }
  }
}

TEST(Motion, RigidTranslationKeepsVolumes) {
  const auto& m = study_mesh();
  MotionModel model(m, MotionCase{CaseId::RigidTranslation});
  const auto [p, u] = model.evaluate(0.7);
  for (std::size_t c = 0; c < m.cell_count(); c += 37)
    EXPECT_NEAR(hex_volume(m.corners(p, c)), 0.021504, 1e-15);
  EXPECT_DOUBLE_EQ(u[0].x, 0.3);
  EXPECT_DOUBLE_EQ(u[0].y, -0.2);
  EXPECT_DOUBLE_EQ(u[0].z, 0.1);
}

TEST(Case4, SeedDeterminesDisplacements) {
  const auto& m = study_mesh();
  MotionCase a{CaseId::Case4}, b{CaseId::Case4};
  b.params.seed = 43;
  MotionModel ma(m, a), ma2(m, a), mb(m, b);
  const auto pa = ma.evaluate(0.25).first, pa2 = ma2.evaluate(0.25).first, pb = mb.evaluate(0.25).first;
  double same = 0, diff = 0, bnd = 0;
  for (std::size_t v = 0; v < pa.size(); ++v) {
    same = std::fmax(same, max_abs(pa[v] - pa2[v]));
    diff = std::fmax(diff, max_abs(pa[v] - pb[v]));
    if (m.is_boundary_vertex(v)) bnd = std::fmax(bnd, max_abs(pa[v] - m.vertices[v]));
  }
  EXPECT_EQ(same, 0.0);
  EXPECT_GT(diff, 1e-3);
  EXPECT_LE(bnd, 0.05 + 1e-12);
  EXPECT_GT(bnd, 0.01);
}

TEST(Case5, NoSpanwiseMotion) {
  const auto& m = study_mesh();
  MotionModel model(m, MotionCase{CaseId::Case5});
  const auto [p, u] = model.evaluate(0.37);
  for (std::size_t v = 0; v < p.size(); ++v) {
    ASSERT_NEAR(p[v].z, m.vertices[v].z, 1e-14);
    ASSERT_NEAR(u[v].z, 0.0, 1e-14);
  }
}

TEST(SampleMotion, Layout) {
  const auto tr = sample_motion(study_mesh(), MotionCase{CaseId::Case2}, 3);
  EXPECT_EQ(tr.samples(), 7);
  ASSERT_EQ(tr.instants.size(), 8u);
  EXPECT_EQ(tr.positions.size(), 8u);
  EXPECT_NEAR(tr.instants[3], 3.0 / 7.0, 1e-16);
  EXPECT_THROW(sample_motion(study_mesh(), MotionCase{CaseId::Case2}, 0), ConfigError);
}

TEST(SampleMotion, OversizedAmplitudeIsDegenerate) {
  MotionCase mc{CaseId::Case3};
  mc.params.radius = 0.3;  // cells are 0.32 wide; interior nodes move by up to 0.6
  try {
    sample_motion(study_mesh(), mc, 2);
    FAIL() << "expected DegenerateMeshError";
  } catch (const DegenerateMeshError& e) {
    EXPECT_FALSE(e.cells().empty());
  }
}

TEST(Case3Analytic, IncrementValues) {
  const double R = 0.05, d = 0.24;
  EXPECT_EQ(analytic_increment_case3(R, 0.0, d, 0.0), 0.0);
  // one full circle sweeps pi R^2 per unit depth
  EXPECT_NEAR(analytic_increment_case3(R, 0.0, d, 1.0), d * pi * R * R, 1e-17);
  EXPECT_NEAR(analytic_increment_case3(R, 0.0, d, 0.5), 0.5 * d * pi * R * R, 1e-17);
  EXPECT_NEAR(analytic_increment_case3(R, 0.3, d, 0.5), d * (0.5 * pi * R * R + R * 0.3), 1e-16);
}

TEST(Case3Analytic, RateIsDerivative) {
  const double R = 0.05, d = 0.24, y = 0.7, h = 1e-5;
  for (double t : {0.1, 0.45, 0.8}) {
    const double fd =
        (analytic_increment_case3(R, y, d, t + h) - analytic_increment_case3(R, y, d, t - h)) / (2 * h);
    EXPECT_NEAR(analytic_increment_rate_case3(R, y, d, t), fd, 1e-10);
  }
}
