#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "gclkit/errors.hpp"
#include "gclkit/hexmesh.hpp"
#include "gclkit/motion.hpp"
#include "gclkit/spectral.hpp"
#include "gclkit/vec3.hpp"

namespace gclkit {

enum class IncrementMethod { LVI, AEVI };

enum class IfmvMethod { NlfdLvi, NlfdAevi, Avg, TriMap, TsLvi, TsAevi, Zero };

inline std::string to_string(IfmvMethod m) {
  switch (m) {
    case IfmvMethod::NlfdLvi: return "lvi";
    case IfmvMethod::NlfdAevi: return "aevi";
    case IfmvMethod::Avg: return "avg";
    case IfmvMethod::TriMap: return "trimap";
    case IfmvMethod::TsLvi: return "ts-lvi";
    case IfmvMethod::TsAevi: return "ts-aevi";
    case IfmvMethod::Zero: return "zero";
  }
  return "unknown";
}

inline IfmvMethod parse_method(const std::string& s) {
  if (s == "lvi" || s == "nlfd-lvi") return IfmvMethod::NlfdLvi;
  if (s == "aevi" || s == "nlfd-aevi") return IfmvMethod::NlfdAevi;
  if (s == "avg") return IfmvMethod::Avg;
  if (s == "trimap" || s == "tri-map") return IfmvMethod::TriMap;
  if (s == "ts-lvi") return IfmvMethod::TsLvi;
  if (s == "ts-aevi") return IfmvMethod::TsAevi;
  if (s == "zero") return IfmvMethod::Zero;
  throw ConfigError("unknown method '" + s + "'");
}

/// Per-face scalar data over instants, stored at [(n * cells + c) * 6 + m].
struct FaceSeries {
  std::size_t cells = 0;
  int instants = 0;
  std::vector<double> data;

  FaceSeries() = default;
  FaceSeries(std::size_t nc, int nt) : cells(nc), instants(nt), data(nc * 6 * nt, 0.0) {}

  std::size_t width() const { return cells * 6; }
  double& at(int n, std::size_t c, int m) { return data[(n * cells + c) * 6 + m]; }
  double at(int n, std::size_t c, int m) const { return data[(n * cells + c) * 6 + m]; }
};

struct IncrementSeries {
  IncrementMethod method = IncrementMethod::AEVI;
  int direction = -1;  // -1 total, otherwise the velocity component that was kept
  int N = 0;
  double T = 1.0;
  FaceSeries perFace;               // n = 0..2N+1
  std::vector<double> linearSlope;  // [c * 6 + m]
  FaceSeries periodicPart;          // n = 0..2N
};

struct IfmvField {
  IfmvMethod method = IfmvMethod::TriMap;
  int N = 0;
  FaceSeries total;                     // n = 0..2N
  std::array<FaceSeries, 3> byDirection;  // empty unless requested

  bool has_directions() const { return !byDirection[0].data.empty(); }
};

// ---------------------------------------------------------------------------
// closed-form trilinear quantities

/// Exact IFMV of a bilinear face loop (i, j, k, l) with vertex velocities.
inline double face_ifmv(const Face& r0, const Face& v) {
  // S terms are translation invariant; shift to vertex i to limit cancellation
  const Vec3 ri{}, rj = r0[1] - r0[0], rk = r0[2] - r0[0], rl = r0[3] - r0[0];
  const Vec3 &vi = v[0], &vj = v[1], &vk = v[2], &vl = v[3];
  auto tri = [](const Vec3& a, const Vec3& b, const Vec3& c) { return cross(a, b) + cross(b, c) + cross(c, a); };
  const Vec3 sQuad = cross(ri, rj) + cross(rj, rk) + cross(rk, rl) + cross(rl, ri);
  return (dot(vi + vj + vk + vl, sQuad) + dot(vj, tri(ri, rj, rk)) + dot(vk, tri(rj, rk, rl)) +
          dot(vl, tri(rk, rl, ri)) + dot(vi, tri(rl, ri, rj))) /
         12.0;
}

/// Exact IFMV of the six faces of a cell, optionally keeping a single velocity component.
inline std::array<double, 6> ifmv_trimap(const Hex& r, const Hex& v, int direction = -1) {
  std::array<double, 6> g{};
  for (int m = 0; m < 6; ++m) {
    Face fr = face_of(r, m), fv = face_of(v, m);
    if (direction >= 0)
      for (auto& q : fv) q = component(q, direction);
    g[m] = face_ifmv(fr, fv);
  }
  return g;
}

/// Exact dV/dt of a trilinear hexahedron from the product rule on the volume formula.
inline double dvoldt_trimap(const Hex& r, const Hex& v) {
  const Hex s = detail::shifted(r);
  double d = 0.0;
  for (const auto& f : kFaces) {
    const Vec3 &ri = s[f[0]], &rj = s[f[1]], &rk = s[f[2]], &rl = s[f[3]];
    const Vec3 &vi = v[f[0]], &vj = v[f[1]], &vk = v[f[2]], &vl = v[f[3]];
    d -= (dot(vj + vk, cross(ri + rj, ri + rl)) + dot(rj + rk, cross(vi + vj, ri + rl)) +
          dot(rj + rk, cross(ri + rj, vi + vl))) /
         12.0;
  }
  return d;
}

/// Volume of the hexahedron swept by a face loop moving in a straight line from a to b.
inline double sweep_volume(const Face& a, const Face& b) {
  return hex_volume({a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]});
}

/// Part of sweep_volume produced by one displacement component. The swept rate along
/// the straight path is quadratic in the path parameter, so Simpson's rule is exact.
inline double sweep_volume_direction(const Face& a, const Face& b, int direction) {
  Face dv;
  for (int q = 0; q < 4; ++q) dv[q] = component(b[q] - a[q], direction);
  double out = 0.0;
  constexpr double s[3] = {0.0, 0.5, 1.0}, w[3] = {1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0};
  for (int p = 0; p < 3; ++p) {
    Face r;
    for (int q = 0; q < 4; ++q) r[q] = a[q] + s[p] * (b[q] - a[q]);
    out += w[p] * face_ifmv(r, dv);
  }
  return out;
}

// ---------------------------------------------------------------------------
// increments

namespace detail {

inline double sweep(const Face& a, const Face& b, int direction) {
  return direction < 0 ? sweep_volume(a, b) : sweep_volume_direction(a, b, direction);
}

inline IncrementSeries increments(const HexMesh& mesh, const MotionTrajectory& tr, IncrementMethod method,
                                  int direction) {
  IncrementSeries s;
  s.method = method;
  s.direction = direction;
  s.N = tr.N;
  s.T = tr.T;
  const int nt = static_cast<int>(tr.positions.size());
  const std::size_t nc = mesh.cell_count();
  s.perFace = FaceSeries(nc, nt);
  for (std::size_t c = 0; c < nc; ++c) {
    const Hex h0 = mesh.corners(tr.positions[0], c);
    Hex prev = h0;
    for (int n = 1; n < nt; ++n) {
      const Hex hn = mesh.corners(tr.positions[n], c);
      for (int m = 0; m < 6; ++m) {
        if (method == IncrementMethod::LVI)
          s.perFace.at(n, c, m) = sweep(face_of(h0, m), face_of(hn, m), direction);
        else
          s.perFace.at(n, c, m) = s.perFace.at(n - 1, c, m) + sweep(face_of(prev, m), face_of(hn, m), direction);
      }
      prev = hn;
    }
  }
  return s;
}

}  // namespace detail

/// Straight-line sweep from the t_0 configuration to each instant.
inline IncrementSeries lvi_increments(const HexMesh& mesh, const MotionTrajectory& tr, int direction = -1) {
  return detail::increments(mesh, tr, IncrementMethod::LVI, direction);
}

/// Cumulative sum of the sweeps between consecutive instants.
inline IncrementSeries aevi_increments(const HexMesh& mesh, const MotionTrajectory& tr, int direction = -1) {
  return detail::increments(mesh, tr, IncrementMethod::AEVI, direction);
}

/// Fills linearSlope = Omega(T)/T and periodicPart = Omega(t_n) - slope * t_n.
inline void extract_linear_and_periodic(IncrementSeries& s, const std::vector<double>& instants) {
  const int nts = 2 * s.N + 1;
  if (s.perFace.instants != nts + 1 || static_cast<int>(instants.size()) != nts + 1)
    throw ConfigError("extract_linear_and_periodic: closing instant missing");
  const std::size_t w = s.perFace.width();
  s.linearSlope.assign(w, 0.0);
  for (std::size_t j = 0; j < w; ++j) s.linearSlope[j] = s.perFace.data[nts * w + j] / s.T;
  s.periodicPart = FaceSeries(s.perFace.cells, nts);
  for (int n = 0; n < nts; ++n)
    for (std::size_t j = 0; j < w; ++j)
      s.periodicPart.data[n * w + j] = s.perFace.data[n * w + j] - s.linearSlope[j] * instants[n];
}

inline IncrementSeries extracted(IncrementSeries s, const MotionTrajectory& tr) {
  extract_linear_and_periodic(s, tr.instants);
  return s;
}

/// G_hat_k = (i 2 pi k / T) p_hat_k for k != 0 and G_hat_0 = slope, returned at the instants.
inline FaceSeries ifmv_nlfd(const IncrementSeries& s, const SpectralOperator& op) {
  if (s.linearSlope.empty()) throw ConfigError("ifmv_nlfd: periodic part not extracted");
  FaceSeries g(s.periodicPart.cells, op.samples());
  g.data = op.fourier_differentiate_columns(s.periodicPart.data, s.periodicPart.width(), &s.linearSlope);
  return g;
}

/// G = D p + slope.
inline FaceSeries ifmv_ts(const IncrementSeries& s, const SpectralOperator& op) {
  if (s.linearSlope.empty()) throw ConfigError("ifmv_ts: periodic part not extracted");
  FaceSeries g(s.periodicPart.cells, op.samples());
  g.data = op.apply_d_columns(s.periodicPart.data, s.periodicPart.width());
  const std::size_t w = g.width();
  for (int n = 0; n < op.samples(); ++n)
    for (std::size_t j = 0; j < w; ++j) g.data[n * w + j] += s.linearSlope[j];
  return g;
}

// ---------------------------------------------------------------------------
// fields over a trajectory

/// Exact trilinear IFMV at the collocation instants.
inline FaceSeries trimap_series(const HexMesh& mesh, const MotionTrajectory& tr, int direction = -1) {
  const int nts = tr.samples();
  FaceSeries g(mesh.cell_count(), nts);
  for (int n = 0; n < nts; ++n)
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
      const auto f = ifmv_trimap(mesh.corners(tr.positions[n], c), mesh.corners(tr.velocities[n], c), direction);
      for (int m = 0; m < 6; ++m) g.at(n, c, m) = f[m];
    }
  return g;
}

/// Mean vertex velocity dotted with the face area vector.
inline FaceSeries avg_series(const HexMesh& mesh, const MotionTrajectory& tr, int direction = -1) {
  const int nts = tr.samples();
  FaceSeries g(mesh.cell_count(), nts);
  for (int n = 0; n < nts; ++n)
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
      const Hex r = mesh.corners(tr.positions[n], c), v = mesh.corners(tr.velocities[n], c);
      for (int m = 0; m < 6; ++m) {
        const auto& f = kFaces[m];
        Vec3 vbar = 0.25 * (v[f[0]] + v[f[1]] + v[f[2]] + v[f[3]]);
        if (direction >= 0) vbar = component(vbar, direction);
        g.at(n, c, m) = dot(vbar, face_area_vector(r[f[0]], r[f[1]], r[f[2]], r[f[3]]));
      }
    }
  return g;
}

/// Cell volumes at the collocation instants, [n * cells + c].
inline std::vector<double> volume_samples(const HexMesh& mesh, const MotionTrajectory& tr) {
  const int nts = tr.samples();
  std::vector<double> v(static_cast<std::size_t>(nts) * mesh.cell_count());
  for (int n = 0; n < nts; ++n)
    for (std::size_t c = 0; c < mesh.cell_count(); ++c)
      v[n * mesh.cell_count() + c] = hex_volume(mesh.corners(tr.positions[n], c));
  return v;
}

/// Exact dV/dt at the collocation instants, [n * cells + c].
inline std::vector<double> dvoldt_samples(const HexMesh& mesh, const MotionTrajectory& tr) {
  const int nts = tr.samples();
  std::vector<double> v(static_cast<std::size_t>(nts) * mesh.cell_count());
  for (int n = 0; n < nts; ++n)
    for (std::size_t c = 0; c < mesh.cell_count(); ++c)
      v[n * mesh.cell_count() + c] =
          dvoldt_trimap(mesh.corners(tr.positions[n], c), mesh.corners(tr.velocities[n], c));
  return v;
}

namespace detail {

inline FaceSeries method_series(const HexMesh& mesh, const MotionTrajectory& tr, const SpectralOperator& op,
                                IfmvMethod method, int direction) {
  switch (method) {
    case IfmvMethod::NlfdLvi: return ifmv_nlfd(extracted(lvi_increments(mesh, tr, direction), tr), op);
    case IfmvMethod::NlfdAevi: return ifmv_nlfd(extracted(aevi_increments(mesh, tr, direction), tr), op);
    case IfmvMethod::TsLvi: return ifmv_ts(extracted(lvi_increments(mesh, tr, direction), tr), op);
    case IfmvMethod::TsAevi: return ifmv_ts(extracted(aevi_increments(mesh, tr, direction), tr), op);
    case IfmvMethod::Avg: return avg_series(mesh, tr, direction);
    case IfmvMethod::TriMap: return trimap_series(mesh, tr, direction);
    case IfmvMethod::Zero: return FaceSeries(mesh.cell_count(), tr.samples());
  }
  return {};
}

}  // namespace detail

/// IFMV of the given method at every collocation instant. With withDirections the
/// velocity-component split is computed as well.
inline IfmvField compute_ifmv(const HexMesh& mesh, const MotionTrajectory& tr, const SpectralOperator& op,
                              IfmvMethod method, bool withDirections = false) {
  if (op.harmonics() != tr.N) throw ConfigError("compute_ifmv: trajectory and operator disagree on N");
  IfmvField f;
  f.method = method;
  f.N = tr.N;
  f.total = detail::method_series(mesh, tr, op, method, -1);
  if (withDirections)
    for (int d = 0; d < 3; ++d) f.byDirection[d] = detail::method_series(mesh, tr, op, method, d);
  return f;
}

/// Sum of the six face values per cell, [n * cells + c].
inline std::vector<double> cell_sums(const FaceSeries& g) {
  std::vector<double> s(g.instants * g.cells, 0.0);
  for (int n = 0; n < g.instants; ++n)
    for (std::size_t c = 0; c < g.cells; ++c) {
      double acc = 0.0;
      for (int m = 0; m < 6; ++m) acc += g.at(n, c, m);
      s[n * g.cells + c] = acc;
    }
  return s;
}

}  // namespace gclkit
