#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gclkit/errors.hpp"
#include "gclkit/experiment.hpp"
#include "gclkit/verify.hpp"

namespace gclkit {

enum ExitCode { kExitOk = 0, kExitIo = 1, kExitConfig = 2, kExitDegenerate = 3, kExitDivergence = 4 };

struct RunConfig {
  CaseId caseId = CaseId::Case1;
  std::vector<IfmvMethod> methods{IfmvMethod::NlfdLvi, IfmvMethod::NlfdAevi, IfmvMethod::Avg, IfmvMethod::TriMap};
  int nFirst = 1, nLast = 20;
  int nx = 10, ny = 10, nz = 10;
  double Lx = 3.2, Ly = 2.8, Lz = 2.4;
  double T = 1.0;
  MotionParams params;
  bool freestream = false;
  bool timing = false;
  DirectionSplit split = DirectionSplit::FaceFamily;
  FlowConfig flow;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::string out;       // empty = stdout

  void validate() const {
    if (methods.empty()) throw ConfigError("at least one method is required");
    if (nFirst < 1 || nLast > 64 || nFirst > nLast)
      throw ConfigError("harmonic range must satisfy 1 <= a <= b <= 64");
    if (nx < 1 || ny < 1 || nz < 1) throw ConfigError("mesh counts must be >= 1");
    if (!(Lx > 0 && Ly > 0 && Lz > 0)) throw ConfigError("lengths must be > 0");
    if (!(flow.cfl > 0)) throw ConfigError("cfl must be > 0");
    if (flow.maxIterations < 1) throw ConfigError("max-iters must be >= 1");
    if (params.supportRadius < 0) throw ConfigError("support radius must be > 0");
  }
};

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline std::vector<double> parse_doubles(const std::string& s, std::size_t count, const char* what) {
  std::vector<double> v;
  for (const auto& x : split_list(s)) {
    char* end = nullptr;
    const double d = std::strtod(x.c_str(), &end);
    if (end == x.c_str() || *end != '\0') throw ConfigError(std::string(what) + ": not a number '" + x + "'");
    v.push_back(d);
  }
  if (v.size() != count)
    throw ConfigError(std::string(what) + ": expected " + std::to_string(count) + " comma separated values");
  return v;
}

/// "a..b" or a single value.
inline std::pair<int, int> parse_range(const std::string& s) {
  const auto p = s.find("..");
  try {
    if (p == std::string::npos) {
      const int a = std::stoi(s);
      return {a, a};
    }
    return {std::stoi(s.substr(0, p)), std::stoi(s.substr(p + 2))};
  } catch (const std::exception&) {
    throw ConfigError("--n: expected a..b, got '" + s + "'");
  }
}

inline std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_metadata(std::ostream& os, const RunConfig& c) {
  std::string ms;
  for (auto m : c.methods) ms += (ms.empty() ? "" : ",") + to_string(m);
  const auto& p = c.params;
  const double support = p.supportRadius > 0 ? p.supportRadius : 2.0 * std::max(c.Lx, std::max(c.Ly, c.Lz));
  os << "# gclkit run\n";
  os << "# case=" << to_string(c.caseId) << " methods=" << ms << " n=" << c.nFirst << ".." << c.nLast << "\n";
  os << "# mesh=" << c.nx << "," << c.ny << "," << c.nz << " lengths=" << g17(c.Lx) << "," << g17(c.Ly) << ","
     << g17(c.Lz) << " period=" << g17(c.T) << "\n";
  os << "# amplitude=" << g17(p.amplitude.x) << "," << g17(p.amplitude.y) << "," << g17(p.amplitude.z)
     << " alpha0_case2=" << g17(p.alpha0Case2) << " radius=" << g17(p.radius)
     << " random_amplitude=" << g17(p.randomAmplitude) << " alpha0_case5=" << g17(p.alpha0Case5)
     << " pivot_fraction=" << g17(p.pivotFraction) << " alpha0_rotation=" << g17(p.alpha0Rotation) << "\n";
  os << "# seed=" << p.seed << " rng=mt19937_64 rbf_points=boundary_vertices kernel=wendland_c0 support_radius="
     << g17(support) << "\n";
  os << "# direction_split=" << (c.split == DirectionSplit::FaceFamily ? "face-family" : "velocity-component")
     << " order_floor=" << g17(kOrderFloor) << " timing=" << (c.timing ? "on" : "off") << "\n";
  const State w0 = c.flow.w0();
  os << "# freestream=" << (c.freestream ? "on" : "off") << " w0=" << g17(w0[0]) << "," << g17(w0[1]) << ","
     << g17(w0[2]) << "," << g17(w0[3]) << "," << g17(w0[4]) << " gamma=" << g17(c.flow.gamma)
     << " cfl=" << g17(c.flow.cfl) << " kappa2=" << g17(c.flow.kappa2) << " kappa4=" << g17(c.flow.kappa4) << "\n";
  os << "# rk5_alpha=";
  for (int s = 0; s < 5; ++s) os << (s ? "," : "") << g17(c.flow.alpha[s]);
  os << " rk5_beta=";
  for (int s = 0; s < 5; ++s) os << (s ? "," : "") << g17(c.flow.beta[s]);
  os << " convergence_drop=" << g17(c.flow.convergenceDrop) << " max_iters=" << c.flow.maxIterations
     << " absolute_floor=" << g17(c.flow.absoluteFloor) << "\n";
}

inline void write_row(std::ostream& os, const ErrorReport& r) {
  os << r.caseId << "," << r.method << "," << r.N << "," << r.Nts << "," << g17(r.relErrFreestream) << ","
     << g17(r.absErr1) << "," << g17(r.absErr2[0]) << "," << g17(r.absErr2[1]) << "," << g17(r.absErr2[2]) << ","
     << g17(r.fd1) << "," << g17(r.fd2) << "," << g17(r.wallMs) << "\n";
}

inline constexpr const char* kCsvHeader =
    "case,method,N,Nts,rel_err_freestream,abs_err1,abs_err2_x,abs_err2_y,abs_err2_z,fd1_ref,fd2_ref,wall_ms";

/// Worker count: config value, capped by GCLKIT_THREADS when set.
inline unsigned worker_count(const RunConfig& c, std::size_t jobs) {
  unsigned n = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GCLKIT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(jobs)));
}

/// Runs the sweep and writes the CSV. Throws ConfigError / DegenerateMeshError.
/// Returns kExitDivergence when a freestream run diverged (rows are still written).
inline int cmd_run(const RunConfig& c, std::ostream& os) {
  c.validate();
  const HexMesh mesh = build_box_mesh(c.nx, c.ny, c.nz, c.Lx, c.Ly, c.Lz);
  const MotionModel model(mesh, MotionCase{c.caseId, c.params, c.T});
  PointOptions opt;
  opt.freestream = c.freestream;
  opt.timing = c.timing;
  opt.split = c.split;
  opt.flow = c.flow;

  const int count = c.nLast - c.nFirst + 1;
  std::vector<std::vector<ErrorReport>> rows(count);
  std::vector<std::exception_ptr> errors(count);
  std::size_t next = 0;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= static_cast<std::size_t>(count)) return;
        i = next++;
      }
      try {
        rows[i] = evaluate_point(mesh, model, c.nFirst + static_cast<int>(i), c.methods, opt);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned nw = worker_count(c, count);
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < nw; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  write_metadata(os, c);
  os << kCsvHeader << "\n";
  bool diverged = false;
  for (const auto& block : rows)
    for (const auto& r : block) {
      write_row(os, r);
      if (c.freestream && !(r.relErrFreestream <= 1.0)) diverged = true;
    }
  os.flush();
  if (!os) return kExitIo;
  return diverged ? kExitDivergence : kExitOk;
}

/// Runs every property, prints one line each, nonzero exit on any failure.
inline int cmd_verify(std::ostream& os, Mutation mut = Mutation::None) {
  const auto results = run_property_suite(mut);
  int failed = 0;
  for (const auto& r : results) {
    os << (r.pass ? "PASS " : "FAIL ") << r.module << ": " << r.name << " (" << r.detail << ")\n";
    failed += r.pass ? 0 : 1;
  }
  os << (failed ? "FAILED " : "OK ") << results.size() - failed << "/" << results.size() << " properties passed\n";
  return failed ? 1 : 0;
}

}  // namespace gclkit
