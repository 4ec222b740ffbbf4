#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gclkit/errors.hpp"
#include "gclkit/vec3.hpp"

namespace gclkit {

/// Wendland C0 kernel (1 - xi)^2 on xi = distance / supportRadius < 1.
inline double wendland_c0(double distance, double supportRadius) {
  if (!(supportRadius > 0)) throw ConfigError("wendland_c0: support radius must be > 0");
  const double xi = distance / supportRadius;
  return xi < 1.0 ? (1.0 - xi) * (1.0 - xi) : 0.0;
}

struct RbfSystem {
  std::vector<Vec3> rbfPoints;
  double supportRadius = 0.0;
  Eigen::MatrixXd systemMatrix;  // M, N_rbf x N_rbf
  Eigen::MatrixXd evalMatrix;    // A, N_grid x N_rbf
  Eigen::LLT<Eigen::MatrixXd> factorization;
  Eigen::MatrixXd weights;  // A M^-1, cached so every direction and instant is one product

  std::size_t rbf_count() const { return rbfPoints.size(); }
  std::size_t grid_count() const { return static_cast<std::size_t>(evalMatrix.rows()); }
};

inline RbfSystem build_system(const std::vector<Vec3>& rbfPoints, const std::vector<Vec3>& gridPoints,
                              double supportRadius) {
  if (!(supportRadius > 0)) throw ConfigError("build_system: support radius must be > 0");
  if (rbfPoints.empty()) throw ConfigError("build_system: no RBF points");
  const std::size_t nr = rbfPoints.size(), ng = gridPoints.size();

  for (std::size_t a = 0; a < nr; ++a)
    for (std::size_t b = a + 1; b < nr; ++b)
      if (norm(rbfPoints[a] - rbfPoints[b]) == 0.0)
        throw SingularSystemError("build_system: duplicated RBF points " + std::to_string(a) + " and " +
                                      std::to_string(b),
                                  {a, b});

  RbfSystem s;
  s.rbfPoints = rbfPoints;
  s.supportRadius = supportRadius;
  s.systemMatrix.resize(nr, nr);
  for (std::size_t a = 0; a < nr; ++a) {
    s.systemMatrix(a, a) = 1.0;
    for (std::size_t b = a + 1; b < nr; ++b) {
      const double w = wendland_c0(norm(rbfPoints[a] - rbfPoints[b]), supportRadius);
      s.systemMatrix(a, b) = w;
      s.systemMatrix(b, a) = w;
    }
  }
  s.evalMatrix.resize(ng, nr);
  for (std::size_t g = 0; g < ng; ++g)
    for (std::size_t a = 0; a < nr; ++a)
      s.evalMatrix(g, a) = wendland_c0(norm(gridPoints[g] - rbfPoints[a]), supportRadius);

  s.factorization.compute(s.systemMatrix);
  if (s.factorization.info() != Eigen::Success) {
    // locate the breakdown with a pivoted factorization
    Eigen::LDLT<Eigen::MatrixXd> ldlt(s.systemMatrix);
    const Eigen::VectorXd d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    Eigen::VectorXi perm = Eigen::VectorXi::LinSpaced(nr, 0, static_cast<int>(nr) - 1);
    perm = ldlt.transpositionsP().transpose() * perm;
    std::vector<std::size_t> bad;
    for (std::size_t q = 0; q < nr; ++q)
      if (d(q) <= 1e-14 * dmax) bad.push_back(static_cast<std::size_t>(perm(q)));
    throw SingularSystemError("build_system: RBF matrix is not positive definite", bad);
  }
  s.weights = s.factorization.solve(s.evalMatrix.transpose()).transpose();
  return s;
}

/// A M^-1 v for one scalar field given at the RBF points.
inline std::vector<double> interpolate(const RbfSystem& s, std::span<const double> values) {
  if (values.size() != s.rbf_count())
    throw ConfigError("interpolate: expected " + std::to_string(s.rbf_count()) + " values, got " +
                      std::to_string(values.size()));
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  const Eigen::VectorXd out = s.weights * v;
  return {out.data(), out.data() + out.size()};
}

/// Componentwise interpolation of a vector field.
inline std::vector<Vec3> interpolate(const RbfSystem& s, const std::vector<Vec3>& values) {
  if (values.size() != s.rbf_count())
    throw ConfigError("interpolate: expected " + std::to_string(s.rbf_count()) + " values, got " +
                      std::to_string(values.size()));
  Eigen::MatrixXd v(values.size(), 3);
  for (std::size_t a = 0; a < values.size(); ++a)
    for (int d = 0; d < 3; ++d) v(a, d) = values[a][d];
  const Eigen::MatrixXd out = s.weights * v;
  std::vector<Vec3> r(out.rows());
  for (Eigen::Index g = 0; g < out.rows(); ++g) r[g] = {out(g, 0), out(g, 1), out(g, 2)};
  return r;
}

}  // namespace gclkit
