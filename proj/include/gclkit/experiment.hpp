#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "gclkit/flow.hpp"
#include "gclkit/gcl.hpp"
#include "gclkit/hexmesh.hpp"
#include "gclkit/metrics.hpp"
#include "gclkit/motion.hpp"
#include "gclkit/spectral.hpp"

namespace gclkit {

struct PointOptions {
  bool freestream = false;
  bool timing = false;
  DirectionSplit split = DirectionSplit::FaceFamily;
  FlowConfig flow;
};

/// All error metrics for one motion and harmonic count, one report per method.
inline std::vector<ErrorReport> evaluate_point(const HexMesh& mesh, const MotionModel& model, int N,
                                               const std::vector<IfmvMethod>& methods, const PointOptions& opt = {}) {
  using Clock = std::chrono::steady_clock;
  const auto tr = sample_motion(model, mesh, N);
  const SpectralOperator op(N, tr.T);
  const auto vol = volume_samples(mesh, tr);
  const auto exact = dvoldt_samples(mesh, tr);
  const auto [fd1, fd2] = fd_reference_errors(vol, exact, mesh.cell_count(), op.samples(), tr.T);
  const bool dirs = opt.split == DirectionSplit::VelocityComponent;
  const IfmvField ref = compute_ifmv(mesh, tr, op, IfmvMethod::TriMap, dirs);

  std::vector<ErrorReport> out;
  for (IfmvMethod m : methods) {
    const auto t0 = Clock::now();
    const IfmvField f = m == IfmvMethod::TriMap ? ref : compute_ifmv(mesh, tr, op, m, dirs);
    ErrorReport r;
    r.caseId = to_string(model.motion_case().caseId);
    r.method = to_string(m);
    r.N = N;
    r.Nts = op.samples();
    r.absErr1 = abs_err_sum_vs_dvoldt(f.total, vol, op);
    for (int d = 0; d < 3; ++d) r.absErr2[d] = abs_err_ifmv_vs_reference(f, ref, d, opt.split);
    r.fd1 = fd1;
    r.fd2 = fd2;
    if (opt.freestream) {
      FlowSolver solver(mesh, tr, f.total, opt.flow);
      const auto fr = solver.run();
      r.relErrFreestream = fr.relErr;
    }
    if (opt.timing) r.wallMs = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    out.push_back(r);
  }
  return out;
}

}  // namespace gclkit
