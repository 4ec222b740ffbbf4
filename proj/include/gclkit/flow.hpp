#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gclkit/errors.hpp"
#include "gclkit/gcl.hpp"
#include "gclkit/metrics.hpp"
#include "gclkit/state.hpp"
#include "gclkit/hexmesh.hpp"
#include "gclkit/motion.hpp"
#include "gclkit/spectral.hpp"

namespace gclkit {

inline double pressure(const State& w, double gamma = 1.4) {
  if (!(w[0] > 0)) throw std::domain_error("pressure: nonpositive density");
  return (gamma - 1.0) * (w[4] - 0.5 * (w[1] * w[1] + w[2] * w[2] + w[3] * w[3]) / w[0]);
}

inline double pressure(const ConservativeState& s) {
  const double p = pressure(s.vec(), s.gamma);
  if (!(p > 0)) throw std::domain_error("pressure: nonpositive pressure");
  return p;
}

/// Convective flux through area vector S on a static face.
inline State convective_flux(const State& w, const Vec3& S, double gamma) {
  const double p = pressure(w, gamma);
  const Vec3 u{w[1] / w[0], w[2] / w[0], w[3] / w[0]};
  const double V = dot(u, S);
  return {w[0] * V, w[1] * V + S.x * p, w[2] * V + S.y * p, w[3] * V + S.z * p, (w[4] + p) * V};
}

/// Central ALE flux: average of the static fluxes minus G times the average state.
inline State ale_face_flux(const State& wL, const State& wR, const Vec3& S, double G, double gamma = 1.4) {
  const State fl = convective_flux(wL, S, gamma), fr = convective_flux(wR, S, gamma);
  State f;
  for (int q = 0; q < 5; ++q) f[q] = 0.5 * (fl[q] + fr[q]) - G * 0.5 * (wL[q] + wR[q]);
  return f;
}

/// Face spectral radius |u.S - G| + c|S| from the averaged state.
inline double face_spectral_radius(const State& wL, const State& wR, const Vec3& S, double G, double gamma,
                                   bool withMeshVelocity = true) {
  const State w = 0.5 * (wL + wR);
  const Vec3 u{w[1] / w[0], w[2] / w[0], w[3] / w[0]};
  const double c = std::sqrt(gamma * pressure(w, gamma) / w[0]);
  return std::fabs(dot(u, S) - (withMeshVelocity ? G : 0.0)) + c * norm(S);
}

/// Scalar JST dissipation on the face between stencil[1] and stencil[2]
/// (stencil = LL, L, R, RR). Oriented from L to R.
inline State jst_dissipation(const std::array<State, 4>& st, double lambda, double kappa2, double kappa4,
                             double gamma = 1.4) {
  const double pLL = pressure(st[0], gamma), pL = pressure(st[1], gamma), pR = pressure(st[2], gamma),
               pRR = pressure(st[3], gamma);
  const double nuL = std::fabs(pR - 2.0 * pL + pLL) / (pR + 2.0 * pL + pLL);
  const double nuR = std::fabs(pRR - 2.0 * pR + pL) / (pRR + 2.0 * pR + pL);
  const double e2 = kappa2 * std::fmax(nuL, nuR);
  const double e4 = std::fmax(0.0, kappa4 - e2);
  State d;
  for (int q = 0; q < 5; ++q) {
    // third difference from first differences, exactly zero on uniform data
    const double d0 = st[1][q] - st[0][q], d1 = st[2][q] - st[1][q], d2 = st[3][q] - st[2][q];
    d[q] = lambda * (e2 * d1 - e4 * ((d2 - d1) - (d1 - d0)));
  }
  return d;
}

struct FlowConfig {
  double gamma = 1.4;
  double rho0 = 1.0;
  Vec3 u0{0.5, 0.0, 0.0};
  double p0 = 1.0;
  double cfl = 1.5;
  double kappa2 = 1.0;
  double kappa4 = 1.0 / 32.0;
  int maxIterations = 20000;
  double convergenceDrop = 1e-12;
  double absoluteFloor = 1e-14;  // times the reference flux scale
  bool meshVelocityInRadius = true;
  std::array<double, 5> alpha{0.25, 1.0 / 6.0, 0.375, 0.5, 1.0};
  std::array<double, 5> beta{1.0, 0.0, 0.56, 0.0, 0.44};  // 0 = keep previous dissipation

  State w0() const { return ConservativeState::from_primitive(rho0, u0, p0, gamma).vec(); }
};

struct FreestreamResult {
  double relErr = 0.0;
  int iterations = 0;
  double initialResidual = 0.0;
  double finalResidual = 0.0;
  bool converged = false;
  bool diverged = false;
};

/// Euler solver for periodic flow on a moving box mesh, halo cells frozen at W0.
class FlowSolver {
 public:
  FlowSolver(const HexMesh& mesh, const MotionTrajectory& tr, const FaceSeries& ifmv, FlowConfig cfg = {})
      : mesh_(mesh), cfg_(cfg), op_(tr.N, tr.T), nts_(tr.samples()), nc_(mesh.cell_count()) {
    if (ifmv.instants != nts_ || ifmv.cells != nc_) throw ConfigError("FlowSolver: IFMV field shape mismatch");
    w0_ = cfg_.w0();
    build_faces(tr, ifmv);
    vol_.resize(nts_ * nc_);
    for (int n = 0; n < nts_; ++n)
      for (std::size_t c = 0; c < nc_; ++c) vol_[n * nc_ + c] = hex_volume(mesh.corners(tr.positions[n], c));
    states_.assign(nts_ * nc_, w0_);
  }

  const std::vector<State>& states() const { return states_; }  // [n * cells + c]
  std::vector<State>& states() { return states_; }
  const State& w0() const { return w0_; }
  int samples() const { return nts_; }

  /// Spatial residual Q - D at one instant. diss may be null to skip dissipation.
  void spatial_residual(int n, const std::vector<State>& w, std::vector<State>& conv, std::vector<State>* diss) const {
    conv.assign(nc_, State{});
    if (diss) diss->assign(nc_, State{});
    auto st = [&](long c) -> const State& { return c < 0 ? w0_ : w[n * nc_ + c]; };
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      const FaceLink& fl = faces_[f];
      const Vec3& S = S_[n * faces_.size() + f];
      const double G = G_[n * faces_.size() + f];
      const State& wL = st(fl.L);
      const State& wR = st(fl.R);
      const State F = ale_face_flux(wL, wR, S, G, cfg_.gamma);
      if (fl.L >= 0) conv[fl.L] = conv[fl.L] + F;
      if (fl.R >= 0) conv[fl.R] = conv[fl.R] - F;
      if (diss) {
        const double lam = face_spectral_radius(wL, wR, S, G, cfg_.gamma, cfg_.meshVelocityInRadius);
        const State d = jst_dissipation({st(fl.LL), wL, wR, st(fl.RR)}, lam, cfg_.kappa2, cfg_.kappa4, cfg_.gamma);
        if (fl.L >= 0) (*diss)[fl.L] = (*diss)[fl.L] + d;
        if (fl.R >= 0) (*diss)[fl.R] = (*diss)[fl.R] - d;
      }
    }
  }

  /// Time-domain unsteady residual D(Omega w) + Q - D at every instant and cell.
  std::vector<State> unsteady_residual_time_domain() const {
    std::vector<State> r(nts_ * nc_);
    std::vector<double> sig(nts_);
    for (std::size_t c = 0; c < nc_; ++c)
      for (int q = 0; q < 5; ++q) {
        for (int n = 0; n < nts_; ++n) sig[n] = vol_[n * nc_ + c] * states_[n * nc_ + c][q];
        const auto d = op_.fourier_differentiate(sig);
        for (int n = 0; n < nts_; ++n) r[n * nc_ + c][q] = d[n];
      }
    std::vector<State> conv, diss;
    for (int n = 0; n < nts_; ++n) {
      spatial_residual(n, states_, conv, &diss);
      for (std::size_t c = 0; c < nc_; ++c) r[n * nc_ + c] = r[n * nc_ + c] + conv[c] - diss[c];
    }
    return r;
  }

  /// R*_k = i w_k w_hat_k + R_hat_k per cell, harmonic k = -N..N, component; index [(c * Nts + k+N) * 5 + q].
  std::vector<Complex> nlfd_unsteady_residual() const {
    const auto r = unsteady_residual_time_domain();
    std::vector<Complex> out(nc_ * nts_ * 5);
    std::vector<double> sig(nts_);
    for (std::size_t c = 0; c < nc_; ++c)
      for (int q = 0; q < 5; ++q) {
        for (int n = 0; n < nts_; ++n) sig[n] = r[n * nc_ + c][q];
        const auto h = op_.dft(sig);
        for (int k = 0; k < nts_; ++k) out[(c * nts_ + k) * 5 + q] = h[k];
      }
    return out;
  }

  /// Reference flux scale used for the absolute convergence floor.
  double flux_scale() const {
    double smax = 0.0;
    for (const auto& s : S_) smax = std::fmax(smax, norm(s));
    double winf = 0.0;
    for (double x : w0_) winf = std::fmax(winf, std::fabs(x));
    const double c0 = std::sqrt(cfg_.gamma * cfg_.p0 / cfg_.rho0);
    return winf * (norm(cfg_.u0) + c0) * smax;
  }

  /// Pseudo-time march of the Fourier coefficients with the hybrid five-stage scheme.
  FreestreamResult run() {
    try {
      return march();
    } catch (const std::domain_error&) {
      // negative density or pressure along the way
      FreestreamResult res;
      res.diverged = true;
      res.relErr = std::numeric_limits<double>::infinity();
      return res;
    }
  }

 private:
  FreestreamResult march() {
    FreestreamResult res;
    const int N = op_.harmonics();
    const std::size_t nk = N + 1;  // real signals: k = 0..N suffice
    const double w1 = 2.0 * std::numbers::pi / op_.period();

    // coefficients of Omega w, [(c * nk + k) * 5 + q]
    std::vector<Complex> what(nc_ * nk * 5), what0, rhat(nc_ * nk * 5), dhat(nc_ * nk * 5);
    forward(states_, true, what);
    const std::vector<double> dt = local_steps();

    std::vector<State> conv(nc_), diss(nc_), convAll(nts_ * nc_), dissAll(nts_ * nc_);
    std::vector<Complex> qhat(nc_ * nk * 5);
    const double floor = cfg_.absoluteFloor * flux_scale();

    for (int it = 0; it < cfg_.maxIterations; ++it) {
      what0 = what;
      double resNorm = 0.0;
      for (int stage = 0; stage < 5; ++stage) {
        if (stage > 0) backward(what, states_);
        const bool newDiss = cfg_.beta[stage] != 0.0;
        for (int n = 0; n < nts_; ++n) {
          spatial_residual(n, states_, conv, newDiss ? &diss : nullptr);
          for (std::size_t c = 0; c < nc_; ++c) {
            convAll[n * nc_ + c] = conv[c];
            if (newDiss) dissAll[n * nc_ + c] = diss[c];
          }
        }
        forward(convAll, false, qhat);
        if (newDiss) {
          std::vector<Complex> dnew(nc_ * nk * 5);
          forward(dissAll, false, dnew);
          const double b = cfg_.beta[stage];
          for (std::size_t i = 0; i < dhat.size(); ++i) dhat[i] = stage == 0 ? dnew[i] : b * dnew[i] + (1.0 - b) * dhat[i];
        }
        double acc = 0.0;
        for (std::size_t c = 0; c < nc_; ++c)
          for (std::size_t k = 0; k < nk; ++k)
            for (int q = 0; q < 5; ++q) {
              const std::size_t i = (c * nk + k) * 5 + q;
              rhat[i] = Complex(0.0, w1 * static_cast<double>(k)) * what[i] + qhat[i] - dhat[i];
              if (stage == 0) acc += std::norm(rhat[i]) * (k == 0 ? 1.0 : 2.0);
            }
        if (stage == 0) {
          resNorm = std::sqrt(acc / (nc_ * 5.0 * nts_));
          if (it == 0) res.initialResidual = resNorm;
          res.finalResidual = resNorm;
          if (!std::isfinite(resNorm)) {
            res.diverged = true;
            res.iterations = it;
            res.relErr = std::numeric_limits<double>::infinity();
            return res;
          }
          if (resNorm <= cfg_.convergenceDrop * res.initialResidual || resNorm <= floor) {
            res.converged = true;
            res.iterations = it;
            res.relErr = rel_err_freestream(states_, w0_);
            res.diverged = !(res.relErr <= 1.0);
            return res;
          }
        }
        const double a = cfg_.alpha[stage];
        for (std::size_t c = 0; c < nc_; ++c)
          for (std::size_t i = c * nk * 5; i < (c + 1) * nk * 5; ++i) what[i] = what0[i] - a * dt[c] * rhat[i];
      }
      backward(what, states_);
      res.iterations = it + 1;
    }
    res.relErr = rel_err_freestream(states_, w0_);
    res.diverged = !(res.relErr <= 1.0);
    return res;
  }

  struct FaceLink {
    long L, R, LL, RR;  // cell ids, -1 outside the box
  };

  void build_faces(const MotionTrajectory& tr, const FaceSeries& ifmv) {
    const int nn[3] = {mesh_.nx, mesh_.ny, mesh_.nz};
    // outward faces of a cell in each axis direction: minus side, plus side
    const int minusFace[3] = {4, 3, 0}, plusFace[3] = {5, 2, 1};
    struct Src {
      long cell;
      int face;
      double sign;
    };
    std::vector<Src> src;
    for (int d = 0; d < 3; ++d) {
      int idx[3];
      for (idx[0] = 0; idx[0] < nn[0] + (d == 0); ++idx[0])
        for (idx[1] = 0; idx[1] < nn[1] + (d == 1); ++idx[1])
          for (idx[2] = 0; idx[2] < nn[2] + (d == 2); ++idx[2]) {
            auto cellAt = [&](int off) -> long {
              int q[3] = {idx[0], idx[1], idx[2]};
              q[d] += off;
              if (q[d] < 0 || q[d] >= nn[d]) return -1;
              return static_cast<long>(mesh_.cell_id(q[0], q[1], q[2]));
            };
            FaceLink fl{cellAt(-1), cellAt(0), cellAt(-2), cellAt(1)};
            faces_.push_back(fl);
            if (fl.L >= 0)
              src.push_back({fl.L, plusFace[d], 1.0});
            else
              src.push_back({fl.R, minusFace[d], -1.0});
          }
    }
    const std::size_t nf = faces_.size();
    S_.resize(nts_ * nf);
    G_.resize(nts_ * nf);
    for (int n = 0; n < nts_; ++n)
      for (std::size_t f = 0; f < nf; ++f) {
        const Hex h = mesh_.corners(tr.positions[n], src[f].cell);
        const auto& q = kFaces[src[f].face];
        S_[n * nf + f] = src[f].sign * face_area_vector(h[q[0]], h[q[1]], h[q[2]], h[q[3]]);
        G_[n * nf + f] = src[f].sign * ifmv.at(n, src[f].cell, src[f].face);
      }
  }

  std::vector<double> local_steps() const {
    std::vector<double> dt(nc_, std::numeric_limits<double>::infinity());
    std::vector<double> lam(nc_);
    const double wN = 2.0 * std::numbers::pi * op_.harmonics() / op_.period();
    auto st = [&](int n, long c) -> const State& { return c < 0 ? w0_ : states_[n * nc_ + c]; };
    for (int n = 0; n < nts_; ++n) {
      std::fill(lam.begin(), lam.end(), 0.0);
      for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& fl = faces_[f];
        const double l = face_spectral_radius(st(n, fl.L), st(n, fl.R), S_[n * faces_.size() + f],
                                              G_[n * faces_.size() + f], cfg_.gamma, cfg_.meshVelocityInRadius);
        if (fl.L >= 0) lam[fl.L] += l;
        if (fl.R >= 0) lam[fl.R] += l;
      }
      for (std::size_t c = 0; c < nc_; ++c) {
        const double v = vol_[n * nc_ + c];
        // half the six-face sum is the usual sum of directional radii
        dt[c] = std::fmin(dt[c], cfg_.cfl * v / (0.5 * lam[c] + v * wN));
      }
    }
    return dt;
  }

  /// Coefficients k = 0..N of x(t_n) (times the cell volume if scale).
  void forward(const std::vector<State>& x, bool scale, std::vector<Complex>& out) const {
    const std::size_t nk = op_.harmonics() + 1;
    out.assign(nc_ * nk * 5, Complex{});
    std::vector<double> sig(nts_);
    for (std::size_t c = 0; c < nc_; ++c)
      for (int q = 0; q < 5; ++q) {
        for (int n = 0; n < nts_; ++n) sig[n] = x[n * nc_ + c][q] * (scale ? vol_[n * nc_ + c] : 1.0);
        const auto h = op_.dft(sig);
        for (std::size_t k = 0; k < nk; ++k) out[(c * nk + k) * 5 + q] = h[op_.harmonics() + k];
      }
  }

  /// States w(t_n) = IDFT(w_hat)(t_n) / Omega(t_n).
  void backward(const std::vector<Complex>& what, std::vector<State>& w) const {
    const int N = op_.harmonics();
    const std::size_t nk = N + 1;
    std::vector<Complex> full(nts_);
    for (std::size_t c = 0; c < nc_; ++c)
      for (int q = 0; q < 5; ++q) {
        for (int k = 0; k <= N; ++k) {
          full[N + k] = what[(c * nk + k) * 5 + q];
          full[N - k] = std::conj(what[(c * nk + k) * 5 + q]);
        }
        const auto s = op_.idft(full);
        for (int n = 0; n < nts_; ++n) w[n * nc_ + c][q] = s[n] / vol_[n * nc_ + c];
      }
  }

  const HexMesh& mesh_;
  FlowConfig cfg_;
  SpectralOperator op_;
  int nts_;
  std::size_t nc_;
  State w0_;
  std::vector<FaceLink> faces_;
  std::vector<Vec3> S_;
  std::vector<double> G_;
  std::vector<double> vol_;
  std::vector<State> states_;
};

/// Freestream preservation run for one motion, harmonic count and IFMV method.
inline FreestreamResult run_freestream(const HexMesh& mesh, const MotionCase& mc, int N, IfmvMethod method,
                                       FlowConfig cfg = {}) {
  const auto tr = sample_motion(mesh, mc, N);
  const SpectralOperator op(N, mc.T);
  const auto g = compute_ifmv(mesh, tr, op, method);
  FlowSolver solver(mesh, tr, g.total, cfg);
  return solver.run();
}

}  // namespace gclkit
