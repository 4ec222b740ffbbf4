#pragma once

#include <array>

#include "gclkit/vec3.hpp"

namespace gclkit {

/// Conservative variables (rho, rho u, rho v, rho w, rho E).
using State = std::array<double, 5>;

struct ConservativeState {
  double rho = 1.0, rhoU = 0.0, rhoV = 0.0, rhoW = 0.0, rhoE = 2.5;
  double gamma = 1.4;

  State vec() const { return {rho, rhoU, rhoV, rhoW, rhoE}; }

  static ConservativeState from_primitive(double rho, Vec3 u, double p, double gamma = 1.4) {
    return {rho, rho * u.x, rho * u.y, rho * u.z, p / (gamma - 1.0) + 0.5 * rho * dot(u, u), gamma};
  }
};

inline State operator+(State a, const State& b) {
  for (int q = 0; q < 5; ++q) a[q] += b[q];
  return a;
}
inline State operator-(State a, const State& b) {
  for (int q = 0; q < 5; ++q) a[q] -= b[q];
  return a;
}
inline State operator*(double s, State a) {
  for (auto& x : a) x *= s;
  return a;
}

}  // namespace gclkit
