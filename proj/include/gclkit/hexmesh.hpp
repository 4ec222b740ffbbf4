#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gclkit/errors.hpp"
#include "gclkit/vec3.hpp"

namespace gclkit {

/// Face vertex loops (zero based) in the order 4321, 5678, 3487, 1265, 4158, 2376.
/// Each loop is oriented so that (r_j - r_i) x (r_l - r_i) points out of the cell.
inline constexpr std::array<std::array<int, 4>, 6> kFaces = {{
    {3, 2, 1, 0},  // zeta = 0
    {4, 5, 6, 7},  // zeta = 1
    {2, 3, 7, 6},  // eta = 1
    {0, 1, 5, 4},  // eta = 0
    {3, 0, 4, 7},  // xi = 0
    {1, 2, 6, 5},  // xi = 1
}};

/// Reference axis normal to each face (0 = xi/x, 1 = eta/y, 2 = zeta/z).
inline constexpr std::array<int, 6> kFaceAxis = {2, 2, 1, 1, 0, 0};

using Face = std::array<Vec3, 4>;

inline Face face_of(const Hex& r, int m) {
  const auto& f = kFaces[m];
  return {r[f[0]], r[f[1]], r[f[2]], r[f[3]]};
}

struct HexMesh {
  int nx = 0, ny = 0, nz = 0;
  double Lx = 0, Ly = 0, Lz = 0;
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 8>> cellVertexIds;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t cell_count() const { return cellVertexIds.size(); }

  std::size_t vertex_id(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * (ny + 1) + j) * (nz + 1) + k;
  }
  std::size_t cell_id(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * ny + j) * nz + k;
  }

  /// Vertex lies on the box boundary (index based, so no tolerance issues).
  bool is_boundary_vertex(std::size_t v) const {
    const int k = static_cast<int>(v % (nz + 1));
    const int j = static_cast<int>((v / (nz + 1)) % (ny + 1));
    const int i = static_cast<int>(v / ((nz + 1) * static_cast<std::size_t>(ny + 1)));
    return i == 0 || i == nx || j == 0 || j == ny || k == 0 || k == nz;
  }

  std::vector<std::size_t> boundary_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < vertex_count(); ++v)
      if (is_boundary_vertex(v)) out.push_back(v);
    return out;
  }

  Hex corners(const std::vector<Vec3>& positions, std::size_t c) const {
    Hex h;
    const auto& ids = cellVertexIds[c];
    for (int a = 0; a < 8; ++a) h[a] = positions[ids[a]];
    return h;
  }

  double max_length() const { return std::max(Lx, std::max(Ly, Lz)); }
};

inline HexMesh build_box_mesh(int nx, int ny, int nz, double Lx, double Ly, double Lz) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw ConfigError("build_box_mesh: cell counts must be >= 1");
  if (!(Lx > 0) || !(Ly > 0) || !(Lz > 0))
    throw ConfigError("build_box_mesh: lengths must be > 0");

  HexMesh m;
  m.nx = nx; m.ny = ny; m.nz = nz;
  m.Lx = Lx; m.Ly = Ly; m.Lz = Lz;
  m.vertices.resize(static_cast<std::size_t>(nx + 1) * (ny + 1) * (nz + 1));
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j)
      for (int k = 0; k <= nz; ++k)
        m.vertices[m.vertex_id(i, j, k)] = {Lx * i / nx, Ly * j / ny, Lz * k / nz};

  m.cellVertexIds.resize(static_cast<std::size_t>(nx) * ny * nz);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        auto v = [&](int a, int b, int c) { return static_cast<std::uint32_t>(m.vertex_id(a, b, c)); };
        m.cellVertexIds[m.cell_id(i, j, k)] = {v(i, j, k),         v(i + 1, j, k),
                                               v(i + 1, j + 1, k), v(i, j + 1, k),
                                               v(i, j, k + 1),     v(i + 1, j, k + 1),
                                               v(i + 1, j + 1, k + 1), v(i, j + 1, k + 1)};
      }
  return m;
}

namespace detail {

/// Contribution of one face loop to the hexahedron volume.
/// The sign is chosen for outward loops, so the six contributions add up to +V.
inline double face_volume_term(const Vec3& ri, const Vec3& rj, const Vec3& rk, const Vec3& rl) {
  return -dot(rj + rk, cross(ri + rj, ri + rl)) / 12.0;
}

inline Hex shifted(const Hex& r) {
  Hex s;
  for (int a = 0; a < 8; ++a) s[a] = r[a] - r[0];
  return s;
}

}  // namespace detail

/// Per-face volume contributions V_ijkl (after shifting the origin to vertex 1).
inline std::array<double, 6> hex_volume_terms(const Hex& r) {
  const Hex s = detail::shifted(r);
  std::array<double, 6> out{};
  for (int m = 0; m < 6; ++m) {
    const auto& f = kFaces[m];
    out[m] = detail::face_volume_term(s[f[0]], s[f[1]], s[f[2]], s[f[3]]);
  }
  return out;
}

/// Exact volume of the trilinear hexahedron. Negative for inverted cells.
inline double hex_volume(const Hex& r) {
  const auto t = hex_volume_terms(r);
  double v = 0.0;
  for (double x : t) v += x;
  return v;
}

/// Area vector of a bilinear face: half the cross product of its diagonals.
inline Vec3 face_area_vector(const Vec3& ri, const Vec3& rj, const Vec3& rk, const Vec3& rl) {
  return 0.5 * cross(rk - ri, rl - rj);
}

inline std::array<Vec3, 6> face_area_vectors(const Hex& r) {
  std::array<Vec3, 6> out;
  for (int m = 0; m < 6; ++m) {
    const auto& f = kFaces[m];
    out[m] = face_area_vector(r[f[0]], r[f[1]], r[f[2]], r[f[3]]);
  }
  return out;
}

/// det J of the trilinear map at each of the 8 reference corners (vertex order).
inline std::array<double, 8> corner_jacobians(const Hex& r) {
  // corner index -> reference coordinates
  static constexpr int ref[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  auto at = [&](int a, int b, int c) {
    for (int q = 0; q < 8; ++q)
      if (ref[q][0] == a && ref[q][1] == b && ref[q][2] == c) return r[q];
    return Vec3{};
  };
  std::array<double, 8> out{};
  for (int q = 0; q < 8; ++q) {
    const int a = ref[q][0], b = ref[q][1], c = ref[q][2];
    const Vec3 dxi = at(1, b, c) - at(0, b, c);
    const Vec3 deta = at(a, 1, c) - at(a, 0, c);
    const Vec3 dzeta = at(a, b, 1) - at(a, b, 0);
    out[q] = dot(dxi, cross(deta, dzeta));
  }
  return out;
}

struct CellGeometry {
  double volume = 0.0;
  std::array<Vec3, 6> faceAreaVectors;
  int jacobianSign = 0;  // +1 all corners positive, -1 all negative, 0 mixed or zero
};

inline CellGeometry cell_geometry(const Hex& r) {
  CellGeometry g;
  g.volume = hex_volume(r);
  g.faceAreaVectors = face_area_vectors(r);
  const auto j = corner_jacobians(r);
  bool allPos = true, allNeg = true;
  for (double d : j) {
    allPos = allPos && d > 0;
    allNeg = allNeg && d < 0;
  }
  g.jacobianSign = allPos ? 1 : (allNeg ? -1 : 0);
  return g;
}

/// Trilinear position at reference point (xi, eta, zeta) in [0, 1]^3.
inline Vec3 trilinear_point(const Hex& r, double xi, double eta, double zeta) {
  const double a = 1 - xi, b = 1 - eta, c = 1 - zeta;
  return a * b * c * r[0] + xi * b * c * r[1] + xi * eta * c * r[2] + a * eta * c * r[3] +
         a * b * zeta * r[4] + xi * b * zeta * r[5] + xi * eta * zeta * r[6] + a * eta * zeta * r[7];
}

/// det J of the trilinear map at (xi, eta, zeta).
inline double jacobian_det(const Hex& r, double xi, double eta, double zeta) {
  const double a = 1 - xi, b = 1 - eta, c = 1 - zeta;
  const Vec3 dxi = b * c * (r[1] - r[0]) + eta * c * (r[2] - r[3]) + b * zeta * (r[5] - r[4]) +
                   eta * zeta * (r[6] - r[7]);
  const Vec3 deta = a * c * (r[3] - r[0]) + xi * c * (r[2] - r[1]) + a * zeta * (r[7] - r[4]) +
                    xi * zeta * (r[6] - r[5]);
  const Vec3 dzeta = a * b * (r[4] - r[0]) + xi * b * (r[5] - r[1]) + xi * eta * (r[6] - r[2]) +
                     a * eta * (r[7] - r[3]);
  return dot(dxi, cross(deta, dzeta));
}

/// Volume by 3x3x3 Gauss-Legendre quadrature of det J. Exact for trilinear cells,
/// used as an independent check of hex_volume.
inline double hex_volume_gauss(const Hex& r) {
  static const double q = std::sqrt(0.6);
  const double x[3] = {0.5 * (1 - q), 0.5, 0.5 * (1 + q)};
  const double w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  double v = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) v += w[i] * w[j] * w[k] * jacobian_det(r, x[i], x[j], x[k]);
  return v;
}

/// Cells with a nonpositive corner Jacobian or nonpositive volume.
inline std::vector<std::size_t> detect_degenerate(const HexMesh& mesh, const std::vector<Vec3>& positions) {
  std::vector<std::size_t> bad;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const Hex h = mesh.corners(positions, c);
    bool ok = hex_volume(h) > 0;
    if (ok)
      for (double d : corner_jacobians(h)) ok = ok && d > 0;
    if (!ok) bad.push_back(c);
  }
  return bad;
}

}  // namespace gclkit
