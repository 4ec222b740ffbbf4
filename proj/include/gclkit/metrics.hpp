#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gclkit/gcl.hpp"
#include "gclkit/hexmesh.hpp"
#include "gclkit/spectral.hpp"
#include "gclkit/state.hpp"

namespace gclkit {

/// How AbsErr2 is split into x, y, z.
///  FaceFamily: faces normal to reference axis d (xi, eta, zeta) compared on their totals.
///  VelocityComponent: the velocity-component fields of both methods are compared.
enum class DirectionSplit { FaceFamily, VelocityComponent };

struct ErrorReport {
  std::string caseId;
  std::string method;
  int N = 0;
  int Nts = 0;
  double relErrFreestream = std::nan("");
  double absErr1 = 0.0;
  std::array<double, 3> absErr2{};
  double fd1 = 0.0;
  double fd2 = 0.0;
  double wallMs = 0.0;
};

/// max over cells and instants of |sum_m G_m - Fourier derivative of the volume|.
inline double abs_err_sum_vs_dvoldt(const FaceSeries& g, const std::vector<double>& volumes,
                                    const SpectralOperator& op) {
  const auto d = op.fourier_differentiate_columns(volumes, g.cells);
  const auto s = cell_sums(g);
  double e = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) e = std::fmax(e, std::fabs(s[i] - d[i]));
  return e;
}

inline double abs_err_ifmv_vs_reference(const IfmvField& field, const IfmvField& reference, int direction,
                                        DirectionSplit split = DirectionSplit::FaceFamily) {
  double e = 0.0;
  if (split == DirectionSplit::FaceFamily) {
    const auto& a = field.total;
    const auto& b = reference.total;
    for (int n = 0; n < a.instants; ++n)
      for (std::size_t c = 0; c < a.cells; ++c)
        for (int m = 0; m < 6; ++m)
          if (kFaceAxis[m] == direction) e = std::fmax(e, std::fabs(a.at(n, c, m) - b.at(n, c, m)));
    return e;
  }
  if (!field.has_directions() || !reference.has_directions())
    throw ConfigError("abs_err_ifmv_vs_reference: directional fields were not computed");
  const auto& a = field.byDirection[direction].data;
  const auto& b = reference.byDirection[direction].data;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::fmax(e, std::fabs(a[i] - b[i]));
  return e;
}

/// Backward (first order) and centred (second order) periodic differences of the
/// volumes against the exact dV/dt; both [n * width + c].
inline std::pair<double, double> fd_reference_errors(const std::vector<double>& volumes,
                                                     const std::vector<double>& exact, std::size_t width, int nts,
                                                     double T) {
  const double h = T / nts;
  double e1 = 0.0, e2 = 0.0;
  for (int n = 0; n < nts; ++n) {
    const int prev = (n + nts - 1) % nts, next = (n + 1) % nts;
    for (std::size_t c = 0; c < width; ++c) {
      const double ex = exact[n * width + c];
      const double b = (volumes[n * width + c] - volumes[prev * width + c]) / h;
      const double m = (volumes[next * width + c] - volumes[prev * width + c]) / (2.0 * h);
      e1 = std::fmax(e1, std::fabs(b - ex));
      e2 = std::fmax(e2, std::fabs(m - ex));
    }
  }
  return {e1, e2};
}

/// Max componentwise relative deviation from W0; zero components use ||W0||_inf.
inline double rel_err_freestream(const std::vector<State>& states, const State& w0) {
  double winf = 0.0;
  for (double x : w0) winf = std::fmax(winf, std::fabs(x));
  double err = 0.0;
  for (const auto& w : states)
    for (int q = 0; q < 5; ++q) {
      const double ref = w0[q] != 0.0 ? std::fabs(w0[q]) : winf;
      const double e = std::fabs(w[q] - w0[q]) / ref;
      if (std::isnan(e)) return std::numeric_limits<double>::infinity();
      err = std::fmax(err, e);
    }
  return err;
}

inline constexpr double kOrderFloor = 1e-13;

/// Least-squares slope of log(err) against log(1/Nts), ignoring points at the noise floor.
/// Empty when fewer than three usable points remain.
inline std::optional<double> fitted_order(const std::vector<std::pair<double, double>>& ntsAndError,
                                          double floor = kOrderFloor) {
  std::vector<double> x, y;
  for (const auto& [nts, err] : ntsAndError)
    if (err > floor && nts > 0) {
      x.push_back(std::log(1.0 / nts));
      y.push_back(std::log(err));
    }
  if (x.size() < 3) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

}  // namespace gclkit
