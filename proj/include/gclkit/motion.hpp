#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gclkit/errors.hpp"
#include "gclkit/hexmesh.hpp"
#include "gclkit/rbf.hpp"
#include "gclkit/vec3.hpp"

namespace gclkit {

enum class CaseId { Case1, Case2, Case3, Case4, Case5, RigidTranslation, RigidRotation };

inline std::string to_string(CaseId c) {
  switch (c) {
    case CaseId::Case1: return "case1";
    case CaseId::Case2: return "case2";
    case CaseId::Case3: return "case3";
    case CaseId::Case4: return "case4";
    case CaseId::Case5: return "case5";
    case CaseId::RigidTranslation: return "rigidTranslation";
    case CaseId::RigidRotation: return "rigidRotation";
  }
  return "unknown";
}

inline CaseId parse_case(const std::string& s) {
  if (s == "1" || s == "case1") return CaseId::Case1;
  if (s == "2" || s == "case2") return CaseId::Case2;
  if (s == "3" || s == "case3") return CaseId::Case3;
  if (s == "4" || s == "case4") return CaseId::Case4;
  if (s == "5" || s == "case5") return CaseId::Case5;
  if (s == "translation" || s == "rigidTranslation") return CaseId::RigidTranslation;
  if (s == "rotation" || s == "rigidRotation") return CaseId::RigidRotation;
  throw ConfigError("unknown case '" + s + "'");
}

struct MotionParams {
  Vec3 amplitude{0.15, 0.15, 0.15};  // case 1
  double alpha0Case2 = 0.1;          // rad
  double radius = 0.05;              // case 3
  double randomAmplitude = 0.05;     // case 4, uniform in [-a, a]
  std::uint64_t seed = 42;           // case 4
  double alpha0Case5 = 0.05;         // rad
  double pivotFraction = 0.621;      // case 5, x_p = pivotFraction * Lx
  Vec3 translationVelocity{0.3, -0.2, 0.1};
  double alpha0Rotation = 0.1;       // rad, about the z axis through the box centre
  double supportRadius = 0.0;        // 0 selects 2 * max(Lx, Ly, Lz)
};

struct MotionCase {
  CaseId caseId = CaseId::Case1;
  MotionParams params;
  double T = 1.0;
};

struct MotionTrajectory {
  int N = 0;
  double T = 1.0;
  std::vector<double> instants;                 // 2N+2 values, last one is T
  std::vector<std::vector<Vec3>> positions;     // [instant][vertex]
  std::vector<std::vector<Vec3>> velocities;    // [instant][vertex]

  int samples() const { return 2 * N + 1; }
};

/// Uniform doubles in [0, 1) from raw 64-bit output, identical on every platform.
inline double unit_uniform(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

/// Evaluates positions and velocities of every mesh vertex at arbitrary times.
class MotionModel {
 public:
  MotionModel(const HexMesh& mesh, MotionCase mc) : mesh_(mesh), mc_(std::move(mc)) {
    if (!(mc_.T > 0)) throw ConfigError("motion: period must be > 0");
    if (mc_.caseId == CaseId::Case4 || mc_.caseId == CaseId::Case5) {
      rbfIds_ = mesh_.boundary_vertices();
      std::vector<Vec3> pts;
      pts.reserve(rbfIds_.size());
      for (auto v : rbfIds_) pts.push_back(mesh_.vertices[v]);
      const double R = mc_.params.supportRadius > 0 ? mc_.params.supportRadius : 2.0 * mesh_.max_length();
      rbf_ = build_system(pts, mesh_.vertices, R);
    }
    if (mc_.caseId == CaseId::Case4) {
      std::mt19937_64 gen(mc_.params.seed);
      const double a = mc_.params.randomAmplitude;
      amp4_.resize(rbfIds_.size());
      for (auto& r : amp4_)
        for (int d = 0; d < 3; ++d) r[d] = a * (2.0 * unit_uniform(gen) - 1.0);
    }
  }

  const MotionCase& motion_case() const { return mc_; }
  const std::optional<RbfSystem>& rbf() const { return rbf_; }
  const std::vector<Vec3>& case4_amplitudes() const { return amp4_; }

  /// Positions and velocities of all vertices at time t.
  std::pair<std::vector<Vec3>, std::vector<Vec3>> evaluate(double t) const {
    const auto& X = mesh_.vertices;
    const auto& p = mc_.params;
    const double w = 2.0 * std::numbers::pi / mc_.T;
    // phase reduced to [0, T) so t = T reproduces t = 0 bit for bit
    double tp = std::fmod(t, mc_.T);
    if (tp < 0) tp += mc_.T;
    const double L[3] = {mesh_.Lx, mesh_.Ly, mesh_.Lz};
    std::vector<Vec3> pos = X, vel(X.size());

    switch (mc_.caseId) {
      case CaseId::Case1: {
        const double s = std::sin(w * tp), c = std::cos(w * tp);
        for (std::size_t v = 0; v < X.size(); ++v) {
          const double f = std::sin(std::numbers::pi * X[v].x / L[0]) * std::sin(std::numbers::pi * X[v].y / L[1]) *
                           std::sin(std::numbers::pi * X[v].z / L[2]);
          for (int d = 0; d < 3; ++d) {
            pos[v][d] += p.amplitude[d] * f * s;
            vel[v][d] = p.amplitude[d] * f * w * c;
          }
        }
        break;
      }
      case CaseId::Case2: {
        const double a = p.alpha0Case2 * std::sin(w * tp), ad = p.alpha0Case2 * w * std::cos(w * tp);
        for (std::size_t v = 0; v < X.size(); ++v) {
          const double y0 = X[v].y;
          pos[v] = {X[v].x + y0 * std::sin(a), y0 * std::cos(a), X[v].z};
          vel[v] = {y0 * std::cos(a) * ad, -y0 * std::sin(a) * ad, 0.0};
        }
        break;
      }
      case CaseId::Case3: {
        const double a = w * tp, R = p.radius;
        for (std::size_t v = 0; v < X.size(); ++v) {
          if (mesh_.is_boundary_vertex(v)) continue;
          pos[v].x += R * (1.0 - std::cos(a));
          pos[v].y += R * std::sin(a);
          vel[v] = {R * w * std::sin(a), R * w * std::cos(a), 0.0};
        }
        break;
      }
      case CaseId::Case4: {
        const double s = std::sin(w * tp), c = std::cos(w * tp);
        std::vector<Vec3> shape(rbfIds_.size());
        for (std::size_t q = 0; q < rbfIds_.size(); ++q) {
          const Vec3& r = X[rbfIds_[q]];
          const double twoPi = 2.0 * std::numbers::pi;
          shape[q] = {amp4_[q].x * std::sin(twoPi * r.y) * std::sin(twoPi * r.z),
                      amp4_[q].y * std::sin(twoPi * r.x) * std::sin(twoPi * r.z),
                      amp4_[q].z * std::sin(twoPi * r.y) * std::sin(twoPi * r.z)};
        }
        const auto field = interpolate(*rbf_, shape);
        for (std::size_t v = 0; v < X.size(); ++v) {
          pos[v] += field[v] * s;
          vel[v] = field[v] * (w * c);
        }
        break;
      }
      case CaseId::Case5: {
        const double a = p.alpha0Case5 * std::cos(w * tp), ad = -p.alpha0Case5 * w * std::sin(w * tp);
        const double xp = p.pivotFraction * L[0];
        const double ca = std::cos(a), sa = std::sin(a);
        std::vector<Vec3> disp(rbfIds_.size()), dvel(rbfIds_.size());
        for (std::size_t q = 0; q < rbfIds_.size(); ++q) {
          const Vec3& r = X[rbfIds_[q]];
          const double dx = r.x - xp, y0 = r.y;
          disp[q] = {dx * (ca - 1.0) + y0 * sa, -dx * sa + y0 * (ca - 1.0), 0.0};
          dvel[q] = {(-dx * sa + y0 * ca) * ad, (-dx * ca - y0 * sa) * ad, 0.0};
        }
        const auto d = interpolate(*rbf_, disp);
        const auto u = interpolate(*rbf_, dvel);
        for (std::size_t v = 0; v < X.size(); ++v) {
          pos[v] += d[v];
          vel[v] = u[v];
        }
        break;
      }
      case CaseId::RigidTranslation: {
        for (std::size_t v = 0; v < X.size(); ++v) {
          pos[v] += p.translationVelocity * t;
          vel[v] = p.translationVelocity;
        }
        break;
      }
      case CaseId::RigidRotation: {
        const double th = p.alpha0Rotation * std::sin(w * tp), thd = p.alpha0Rotation * w * std::cos(w * tp);
        const double c = std::cos(th), s = std::sin(th);
        const Vec3 ctr{0.5 * L[0], 0.5 * L[1], 0.0};
        for (std::size_t v = 0; v < X.size(); ++v) {
          const Vec3 r = X[v] - ctr;
          const Vec3 q{c * r.x - s * r.y, s * r.x + c * r.y, r.z};
          pos[v] = ctr + q;
          vel[v] = {-thd * q.y, thd * q.x, 0.0};
        }
        break;
      }
    }
    return {std::move(pos), std::move(vel)};
  }

 private:
  const HexMesh& mesh_;
  MotionCase mc_;
  std::vector<std::size_t> rbfIds_;
  std::optional<RbfSystem> rbf_;
  std::vector<Vec3> amp4_;
};

/// Sample 2N+1 collocation instants plus the closing instant t = T.
inline MotionTrajectory sample_motion(const MotionModel& model, const HexMesh& mesh, int N) {
  if (N < 1) throw ConfigError("sample_motion: N must be >= 1");
  MotionTrajectory tr;
  tr.N = N;
  tr.T = model.motion_case().T;
  const int nts = 2 * N + 1;
  for (int n = 0; n <= nts; ++n) {
    // the closing instant is set to T exactly
    const double t = n == nts ? tr.T : n * tr.T / nts;
    auto [pos, vel] = model.evaluate(t);
    const auto bad = detect_degenerate(mesh, pos);
    if (!bad.empty())
      throw DegenerateMeshError(to_string(model.motion_case().caseId) + ": " + std::to_string(bad.size()) +
                                    " degenerate cells at t = " + std::to_string(t),
                                bad);
    tr.instants.push_back(t);
    tr.positions.push_back(std::move(pos));
    tr.velocities.push_back(std::move(vel));
  }
  return tr;
}

inline MotionTrajectory sample_motion(const HexMesh& mesh, const MotionCase& mc, int N) {
  return sample_motion(MotionModel(mesh, mc), mesh, N);
}

/// Exact volume swept by the moving face of a case 3 cell adjacent to the fixed x = 0 wall.
inline double analytic_increment_case3(double R, double y30, double depth, double t, double T = 1.0) {
  const double a = 2.0 * std::numbers::pi * t / T;
  return depth * (0.5 * R * R * (a - std::sin(a)) + 0.5 * R * y30 * (1.0 - std::cos(a)));
}

inline double analytic_increment_rate_case3(double R, double y30, double depth, double t, double T = 1.0) {
  const double w = 2.0 * std::numbers::pi / T, a = w * t;
  return depth * w * (0.5 * R * R * (1.0 - std::cos(a)) + 0.5 * R * y30 * std::sin(a));
}

}  // namespace gclkit
