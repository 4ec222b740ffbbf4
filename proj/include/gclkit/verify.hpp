#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gclkit/flow.hpp"
#include "gclkit/gcl.hpp"
#include "gclkit/hexmesh.hpp"
#include "gclkit/metrics.hpp"
#include "gclkit/motion.hpp"
#include "gclkit/rbf.hpp"
#include "gclkit/spectral.hpp"

namespace gclkit {

struct PropertyResult {
  std::string module;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Deliberate faults for checking that the suite notices them.
enum class Mutation { None, TrimapCofactor };

/// Random trilinear cell: box with random edges, corners perturbed by up to
/// `perturb` of the shortest edge, random offset.
inline Hex random_hex(std::mt19937_64& g, double perturb = 0.2) {
  auto u = [&](double a, double b) { return a + (b - a) * unit_uniform(g); };
  const Vec3 e{u(0.5, 1.5), u(0.5, 1.5), u(0.5, 1.5)};
  const Vec3 off{u(-2, 2), u(-2, 2), u(-2, 2)};
  const double p = perturb * std::fmin(e.x, std::fmin(e.y, e.z));
  static constexpr int ref[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  Hex h;
  for (int a = 0; a < 8; ++a)
    h[a] = off + Vec3{ref[a][0] * e.x + u(-p, p), ref[a][1] * e.y + u(-p, p), ref[a][2] * e.z + u(-p, p)};
  return h;
}

inline Hex random_velocities(std::mt19937_64& g) {
  Hex v;
  for (auto& q : v) q = {2 * unit_uniform(g) - 1, 2 * unit_uniform(g) - 1, 2 * unit_uniform(g) - 1};
  return v;
}

namespace detail {

/// Face IFMV with the v_j S_ijk cofactor term dropped.
inline double face_ifmv_mutated(const Face& r, const Face& v) {
  Face vm = v;
  const Vec3 ri{}, rj = r[1] - r[0], rk = r[2] - r[0];
  const Vec3 s = cross(ri, rj) + cross(rj, rk) + cross(rk, ri);
  return face_ifmv(r, vm) - dot(v[1], s) / 12.0;
}

inline std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

inline std::string fmt2(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace detail

/// Worst relative mismatch between the sum of face IFMVs and dV/dt over random cells.
inline double trilinear_closure_error(int count, std::uint64_t seed, Mutation mut = Mutation::None) {
  std::mt19937_64 g(seed);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const Hex r = random_hex(g), v = random_velocities(g);
    double sum = 0.0, gmax = 0.0;
    for (int m = 0; m < 6; ++m) {
      const Face fr = face_of(r, m), fv = face_of(v, m);
      const double gm = mut == Mutation::TrimapCofactor ? detail::face_ifmv_mutated(fr, fv) : face_ifmv(fr, fv);
      sum += gm;
      gmax = std::fmax(gmax, std::fabs(gm));
    }
    const double d = dvoldt_trimap(r, v);
    worst = std::fmax(worst, std::fabs(sum - d) / std::fmax(std::fabs(d), gmax));
  }
  return worst;
}

/// Worst relative mismatch between hex_volume and Gauss quadrature over random cells.
inline double volume_oracle_error(int count, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const Hex r = random_hex(g);
    const double q = hex_volume_gauss(r);
    worst = std::fmax(worst, std::fabs(hex_volume(r) - q) / std::fabs(q));
  }
  return worst;
}

/// 10x10x10 study setup shared by the suites.
struct StudySetup {
  HexMesh mesh = build_box_mesh(10, 10, 10, 3.2, 2.8, 2.4);
  MotionParams params;
  double T = 1.0;

  MotionCase motion(CaseId id) const { return {id, params, T}; }
};

inline constexpr CaseId kStudyCases[5] = {CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case4,
                                          CaseId::Case5};

/// Run every module property and report one result per property.
inline std::vector<PropertyResult> run_property_suite(Mutation mut = Mutation::None,
                                                      const StudySetup& setup = StudySetup{}) {
  std::vector<PropertyResult> out;
  auto add = [&](const char* mod, const char* name, bool pass, std::string detail) {
    out.push_back({mod, name, pass, std::move(detail)});
  };
  const HexMesh& mesh = setup.mesh;

  // hexmesh
  {
    std::mt19937_64 g(7);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto s = face_area_vectors(random_hex(g));
      Vec3 sum;
      double amax = 0.0;
      for (const auto& a : s) {
        sum += a;
        amax = std::fmax(amax, norm(a));
      }
      worst = std::fmax(worst, norm(sum) / amax);
    }
    add("hexmesh", "surface closure", worst <= 1e-13, detail::fmt("max |sum S|/max|S| = %.3e", worst));
    const double ve = volume_oracle_error(1000, 11);
    add("hexmesh", "volume oracle", ve <= 1e-13, detail::fmt("max rel err = %.3e", ve));
    double pe = 0.0;
    for (CaseId id : {CaseId::Case1, CaseId::Case3}) {
      MotionModel mm(mesh, setup.motion(id));
      for (double t : {0.13, 0.37, 0.81}) {
        const auto pos = mm.evaluate(t).first;
        double total = 0.0;
        for (std::size_t c = 0; c < mesh.cell_count(); ++c) total += hex_volume(mesh.corners(pos, c));
        const double box = mesh.Lx * mesh.Ly * mesh.Lz;
        pe = std::fmax(pe, std::fabs(total - box) / box);
      }
    }
    add("hexmesh", "partition", pe <= 1e-12, detail::fmt("max rel err = %.3e", pe));
  }

  // motion
  {
    double closure = 0.0, vel = 0.0;
    for (CaseId id : {CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case4, CaseId::Case5,
                      CaseId::RigidRotation}) {
      MotionModel mm(mesh, setup.motion(id));
      const auto tr = sample_motion(mm, mesh, 2);
      for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        closure = std::fmax(closure, max_abs(tr.positions.back()[v] - tr.positions.front()[v]));
      const double h = 1e-6 * setup.T;
      for (double t : {0.1, 0.45, 0.7}) {
        const auto [p, u] = mm.evaluate(t);
        const auto pp = mm.evaluate(t + h).first, pm = mm.evaluate(t - h).first;
        double scale = 0.0;
        for (const auto& q : u) scale = std::fmax(scale, max_abs(q));
        for (std::size_t v = 0; v < p.size(); ++v)
          vel = std::fmax(vel, max_abs((pp[v] - pm[v]) * (0.5 / h) - u[v]) / std::fmax(scale, 1e-300));
      }
    }
    add("motion", "periodic closure", closure == 0.0, detail::fmt("max |r(T) - r(0)| = %.3e", closure));
    add("motion", "velocity consistency", vel <= 1e-6, detail::fmt("max scaled FD mismatch = %.3e", vel));
    const double R = setup.params.radius, y30 = mesh.Ly / mesh.ny, depth = mesh.Lz / mesh.nz;
    double de = 0.0;
    for (double t : {0.05, 0.3, 0.62, 0.9}) {
      // five-point derivative against the closed-form rate
      const double h = 1e-3;
      auto f = [&](double s) { return analytic_increment_case3(R, y30, depth, s, setup.T); };
      const double fd = (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
      de = std::fmax(de, std::fabs(fd - analytic_increment_rate_case3(R, y30, depth, t, setup.T)));
    }
    add("motion", "case 3 increment derivative", de <= 1e-12, detail::fmt("max abs err = %.3e", de));
  }

  // rbf
  {
    MotionModel mm(mesh, setup.motion(CaseId::Case5));
    const RbfSystem& s = *mm.rbf();
    std::mt19937_64 g(3);
    std::vector<double> a(s.rbf_count()), b(s.rbf_count());
    for (auto& x : a) x = 2 * unit_uniform(g) - 1;
    for (auto& x : b) x = 2 * unit_uniform(g) - 1;
    const auto ia = interpolate(s, a), ib = interpolate(s, b);
    const auto ids = mesh.boundary_vertices();
    double ex = 0.0;
    for (std::size_t q = 0; q < ids.size(); ++q) ex = std::fmax(ex, std::fabs(ia[ids[q]] - a[q]));
    add("rbf", "exactness at control points", ex <= 1e-10, detail::fmt("max abs err = %.3e", ex));
    std::vector<double> c(a.size());
    for (std::size_t q = 0; q < a.size(); ++q) c[q] = 0.3 * a[q] - 1.7 * b[q];
    const auto ic = interpolate(s, c);
    double lin = 0.0, sc = 0.0;
    for (std::size_t v = 0; v < ic.size(); ++v) {
      lin = std::fmax(lin, std::fabs(ic[v] - (0.3 * ia[v] - 1.7 * ib[v])));
      sc = std::fmax(sc, std::fabs(ic[v]));
    }
    add("rbf", "linearity", lin <= 1e-13 * sc, detail::fmt("max rel err = %.3e", lin / sc));
    double cons = 0.0;
    for (double t : {0.1, 0.33, 0.6, 0.85}) {
      const double h = 1e-3;
      auto disp = [&](double s2) { return mm.evaluate(s2).first; };
      const auto m2 = disp(t - 2 * h), m1 = disp(t - h), p1 = disp(t + h), p2 = disp(t + 2 * h);
      const auto u = mm.evaluate(t).second;
      for (std::size_t v = 0; v < u.size(); ++v) {
        const Vec3 fd = (m2[v] - 8.0 * m1[v] + 8.0 * p1[v] - p2[v]) * (1.0 / (12 * h));
        cons = std::fmax(cons, max_abs(fd - u[v]));
      }
    }
    add("rbf", "velocity/displacement consistency", cons <= 1e-10, detail::fmt("max abs err = %.3e", cons));
  }

  // spectral
  {
    std::mt19937_64 g(5);
    double rt = 0.0, pars = 0.0, eq = 0.0;
    for (int nts = 3; nts <= 41; nts += 2) {
      const SpectralOperator op = SpectralOperator::for_samples(nts);
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> s(nts);
        for (auto& x : s) x = 2 * unit_uniform(g) - 1;
        const auto c = op.dft(s);
        const auto r = op.idft(c);
        double e2s = 0, e2c = 0;
        for (int n = 0; n < nts; ++n) {
          rt = std::fmax(rt, std::fabs(r[n] - s[n]));
          e2s += s[n] * s[n];
        }
        for (const auto& z : c) e2c += std::norm(z);
        pars = std::fmax(pars, std::fabs(e2s / nts - e2c) / e2c);
        const auto fd = op.fourier_differentiate(s), md = op.apply_d(s);
        for (int n = 0; n < nts; ++n) eq = std::fmax(eq, std::fabs(fd[n] - md[n]));
      }
    }
    add("spectral", "round trip", rt <= 1e-13, detail::fmt("max abs err = %.3e", rt));
    add("spectral", "parseval", pars <= 1e-12, detail::fmt("max rel err = %.3e", pars));
    add("spectral", "operator equivalence", eq <= 1e-12, detail::fmt("max abs err = %.3e", eq));
    bool skew = true;
    double ann = 0.0;
    for (int N = 1; N <= 20; ++N) {
      const auto D = ts_matrix(N, setup.T);
      for (int i = 0; i < D.rows(); ++i) {
        double rs = 0.0;
        for (int j = 0; j < D.cols(); ++j) {
          skew = skew && D(i, j) == -D(j, i);
          rs += D(i, j);
        }
        ann = std::fmax(ann, std::fabs(rs));
      }
    }
    add("spectral", "D skew-symmetric", skew, skew ? "exact" : "asymmetric entry");
    add("spectral", "D annihilates constants", ann <= 1e-12 / setup.T, detail::fmt("max |D 1| = %.3e", ann));
    bool rejected = false;
    try {
      (void)SpectralOperator::for_samples(4);
    } catch (const ConfigError&) {
      rejected = true;
    }
    add("spectral", "even sample count rejected", rejected, rejected ? "Nts = 4 rejected" : "Nts = 4 accepted");
  }

  // gcl
  {
    double gcl = 0.0, ts = 0.0, linear = 0.0, y2 = 0.0;
    for (CaseId id : kStudyCases) {
      MotionModel mm(mesh, setup.motion(id));
      for (int N = 1; N <= 20; ++N) {
        const auto tr = sample_motion(mm, mesh, N);
        const SpectralOperator op(N, setup.T);
        const auto vol = volume_samples(mesh, tr);
        const auto lvi = extracted(lvi_increments(mesh, tr), tr);
        const auto aevi = extracted(aevi_increments(mesh, tr), tr);
        const auto gl = ifmv_nlfd(lvi, op), ga = ifmv_nlfd(aevi, op);
        gcl = std::fmax(gcl, std::fmax(abs_err_sum_vs_dvoldt(gl, vol, op), abs_err_sum_vs_dvoldt(ga, vol, op)));
        for (const auto* s : {&lvi, &aevi}) {
          const auto a = ifmv_nlfd(*s, op), b = ifmv_ts(*s, op);
          for (std::size_t i = 0; i < a.data.size(); ++i) ts = std::fmax(ts, std::fabs(a.data[i] - b.data[i]));
        }
        if (id == CaseId::Case1)
          for (std::size_t i = 0; i < lvi.perFace.data.size(); ++i)
            linear = std::fmax(linear, std::fabs(lvi.perFace.data[i] - aevi.perFace.data[i]));
        if (id == CaseId::Case2 && N >= 6) {
          IfmvField fl{IfmvMethod::NlfdLvi, N, gl, {}}, fa{IfmvMethod::NlfdAevi, N, ga, {}};
          IfmvField ref{IfmvMethod::TriMap, N, trimap_series(mesh, tr), {}};
          y2 = std::fmax(y2, std::fmax(abs_err_ifmv_vs_reference(fl, ref, 1), abs_err_ifmv_vs_reference(fa, ref, 1)));
        }
      }
    }
    add("gcl", "GCL by construction (LVI, AEVI)", gcl <= 1e-10, detail::fmt("max AbsErr1 = %.3e", gcl));
    add("gcl", "NLFD/TS equivalence", ts <= 1e-12, detail::fmt("max |G_ts - G_nlfd| = %.3e", ts));
    const double tc = trilinear_closure_error(1000, 13, mut);
    add("gcl", "trilinear closure", tc <= 1e-13, detail::fmt("max rel err = %.3e", tc));
    add("gcl", "LVI = AEVI on case 1", linear <= 1e-13, detail::fmt("max diff = %.3e", linear));
    add("gcl", "case 2 y exactness (N >= 6)", y2 <= 1e-10, detail::fmt("max AbsErr2_y = %.3e", y2));

    for (CaseId id : {CaseId::Case4, CaseId::Case5}) {
      MotionModel mm(mesh, setup.motion(id));
      std::vector<std::pair<double, double>> pts;
      for (int N : {5, 10, 15, 20}) {
        const auto tr = sample_motion(mm, mesh, N);
        const SpectralOperator op(N, setup.T);
        IfmvField fa{IfmvMethod::NlfdAevi, N, ifmv_nlfd(extracted(aevi_increments(mesh, tr), tr), op), {}};
        IfmvField ref{IfmvMethod::TriMap, N, trimap_series(mesh, tr), {}};
        pts.push_back({2.0 * N + 1, abs_err_ifmv_vs_reference(fa, ref, 0)});
      }
      const auto p = fitted_order(pts);
      const std::string name = "AEVI order bracket, " + to_string(id);
      out.push_back({"gcl", name, p && *p >= 0.8 && *p <= 2.2,
                     p ? detail::fmt("fitted order = %.3f", *p) : "fewer than 3 points above the 1e-13 floor"});
    }

    // one step from t = 0 on the moving face of cell (0, 0, nz/2)
    MotionModel m3(mesh, setup.motion(CaseId::Case3));
    const std::size_t c = mesh.cell_id(0, 0, mesh.nz / 2);
    std::vector<std::pair<double, double>> pts;
    const auto [p0, v0] = m3.evaluate(0.0);
    const Hex h0 = mesh.corners(p0, c), hv = mesh.corners(v0, c);
    for (int nts : {11, 21, 41, 81}) {
      const double tau = setup.T / nts;
      const Hex h1 = mesh.corners(m3.evaluate(tau).first, c);
      Hex hl;
      for (int a = 0; a < 8; ++a) hl[a] = h0[a] + hv[a] * tau;
      pts.push_back({double(nts), std::fabs(sweep_volume(face_of(h0, 5), face_of(h1, 5)) -
                                             sweep_volume(face_of(h0, 5), face_of(hl, 5)))});
    }
    const auto p = fitted_order(pts);
    add("gcl", "single-step truncation order", p && std::fabs(*p - 2.0) <= 0.2,
        p ? detail::fmt("fitted order = %.3f", *p) : "insufficient points");
  }

  // flow
  {
    const auto mc = setup.motion(CaseId::Case2);
    const int N = 3;
    const auto tr = sample_motion(mesh, mc, N);
    const SpectralOperator op(N, setup.T);
    const auto vol = volume_samples(mesh, tr);
    const auto dv = op.fourier_differentiate_columns(vol, mesh.cell_count());
    double ident = 0.0;
    for (IfmvMethod m : {IfmvMethod::NlfdAevi, IfmvMethod::Zero, IfmvMethod::Avg}) {
      const auto g = compute_ifmv(mesh, tr, op, m);
      FlowSolver fs(mesh, tr, g.total);
      const auto r = fs.unsteady_residual_time_domain();
      const auto sums = cell_sums(g.total);
      for (std::size_t i = 0; i < r.size(); ++i)
        for (int q = 0; q < 5; ++q)
          ident = std::fmax(ident, std::fabs(r[i][q] + fs.w0()[q] * (sums[i] - dv[i])));
    }
    add("flow", "freestream algebraic identity", ident <= 1e-12, detail::fmt("max abs err = %.3e", ident));
    const State w0 = FlowConfig{}.w0();
    const State d = jst_dissipation({w0, w0, w0, w0}, 1.3, 1.0, 1.0 / 32.0);
    bool zero = true;
    for (double x : d) zero = zero && x == 0.0;
    add("flow", "JST vanishes on uniform fields", zero, zero ? "exactly zero" : "nonzero");
    const auto g = compute_ifmv(mesh, tr, op, IfmvMethod::NlfdAevi);
    FlowConfig one;
    one.maxIterations = 1;
    one.convergenceDrop = 0.0;
    one.absoluteFloor = 0.0;
    FlowSolver fs(mesh, tr, g.total, one);
    const auto res = fs.run();
    add("flow", "pseudo-time fixed point", res.relErr <= 1e-12, detail::fmt("RelErr after one step = %.3e", res.relErr));
  }

  // metrics
  {
    double self = 0.0;
    bool decay = true, crossing = true;
    std::string dd, cd;
    for (CaseId id : {CaseId::Case2, CaseId::Case3, CaseId::Case5}) {
      MotionModel mm(mesh, setup.motion(id));
      double e2 = 0, e20 = 0;
      bool below = false;
      for (int N = 2; N <= 20; ++N) {
        const auto tr = sample_motion(mm, mesh, N);
        const SpectralOperator op(N, setup.T);
        const auto vol = volume_samples(mesh, tr);
        IfmvField ref{IfmvMethod::TriMap, N, trimap_series(mesh, tr), {}};
        for (int d = 0; d < 3; ++d) self = std::fmax(self, abs_err_ifmv_vs_reference(ref, ref, d));
        const double e = abs_err_sum_vs_dvoldt(ref.total, vol, op);
        const auto [f1, f2] = fd_reference_errors(vol, dvoldt_samples(mesh, tr), mesh.cell_count(), op.samples(), setup.T);
        below = below || (e < f1 && e < f2);
        if (N == 2) e2 = e;
        if (N == 20) e20 = e;
      }
      const bool ok = e20 * 1e3 <= e2;
      decay = decay && ok;
      crossing = crossing && below;
      dd += to_string(id) + detail::fmt2(" %.2e->%.2e ", e2, e20);
      cd += to_string(id) + (below ? " yes " : " no ");
    }
    add("metrics", "TRI-MAP AbsErr1 decays 1e3 from N=2 to N=20", decay, dd);
    add("metrics", "TRI-MAP below FD reference curves", crossing, cd);
    add("metrics", "AbsErr2(TRI-MAP, TRI-MAP) = 0", self == 0.0, detail::fmt("max = %.3e", self));
  }
  return out;
}

}  // namespace gclkit
