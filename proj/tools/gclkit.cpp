// Command line front end: `gclkit run ...` and `gclkit verify`.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "gclkit/cli.hpp"

namespace {

void error_line(int code, const char* kind, const std::string& msg) {
  std::cerr << "error code=" << code << " kind=" << kind << " message=\"" << msg << "\"\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gclkit;
  CLI::App app{"IFMV methods for the geometric conservation law on deforming hexahedral meshes"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string caseName = "1", methods = "lvi,aevi,avg,trimap", nRange = "1..20", mesh = "10,10,10",
              lengths = "3.2,2.8,2.4", amp, freestream = "off", timing = "off", split = "face";
  double alpha0 = 0, radius = 0;

  auto* run = app.add_subcommand("run", "sweep harmonic counts and write CSV error tables");
  // options go under a [run] section; command line flags win
  app.set_config("--config", "", "TOML/INI file with a [run] section of option values");
  run->fallthrough();
  run->add_option("--case", caseName, "1..5, translation or rotation")->capture_default_str();
  run->add_option("--methods", methods, "comma list of lvi, aevi, avg, trimap, ts-lvi, ts-aevi")->capture_default_str();
  run->add_option("--n", nRange, "harmonic range a..b within 1..64")->capture_default_str();
  run->add_option("--mesh", mesh, "cell counts nx,ny,nz")->capture_default_str();
  run->add_option("--lengths", lengths, "box lengths Lx,Ly,Lz")->capture_default_str();
  run->add_option("--period", cfg.T, "motion period")->capture_default_str();
  run->add_option("--amp", amp, "case 1 amplitude (a or ax,ay,az); case 4 random bound");
  auto* alphaOpt = run->add_option("--alpha0", alpha0, "pitch amplitude in rad (cases 2, 5, rotation)");
  auto* radiusOpt = run->add_option("--radius", radius, "case 3 circle radius");
  run->add_option("--seed", cfg.params.seed, "case 4 random seed")->capture_default_str();
  run->add_option("--support-radius", cfg.params.supportRadius, "RBF support radius (default 2 max L)");
  run->add_option("--freestream", freestream, "on/off: run the uniform-flow solver per method")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  run->add_option("--cfl", cfg.flow.cfl, "pseudo-time CFL")->capture_default_str();
  run->add_option("--max-iters", cfg.flow.maxIterations, "pseudo-time iteration cap")->capture_default_str();
  run->add_option("--drop", cfg.flow.convergenceDrop, "pseudo-residual drop target")->capture_default_str();
  run->add_option("--split", split, "AbsErr2 direction split: face or velocity")
      ->check(CLI::IsMember({"face", "velocity"}))
      ->capture_default_str();
  run->add_option("--timing", timing, "on/off: fill wall_ms (off keeps output byte-stable)")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  run->add_option("--threads", cfg.threads, "worker threads (GCLKIT_THREADS caps this)");
  run->add_option("--out", cfg.out, "CSV path (default stdout)");

  auto* verify = app.add_subcommand("verify", "run every property suite");
  std::string mutate = "none";
  verify->add_option("--mutate", mutate, "inject a fault: none or trimap-cofactor")
      ->check(CLI::IsMember({"none", "trimap-cofactor"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_line(kExitConfig, "config", e.what());
    return kExitConfig;
  }

  if (*verify) return cmd_verify(std::cout, mutate == "none" ? Mutation::None : Mutation::TrimapCofactor);

  try {
    cfg.caseId = parse_case(caseName);
    cfg.methods.clear();
    for (const auto& m : split_list(methods)) cfg.methods.push_back(parse_method(m));
    std::tie(cfg.nFirst, cfg.nLast) = parse_range(nRange);
    const auto mc = parse_doubles(mesh, 3, "--mesh");
    for (double x : mc)
      if (x != static_cast<int>(x)) throw ConfigError("--mesh: counts must be integers");
    cfg.nx = static_cast<int>(mc[0]);
    cfg.ny = static_cast<int>(mc[1]);
    cfg.nz = static_cast<int>(mc[2]);
    const auto L = parse_doubles(lengths, 3, "--lengths");
    cfg.Lx = L[0];
    cfg.Ly = L[1];
    cfg.Lz = L[2];
    if (!amp.empty()) {
      const auto parts = split_list(amp);
      const auto a = parse_doubles(amp, parts.size() == 3 ? 3 : 1, "--amp");
      if (a.size() == 3)
        cfg.params.amplitude = {a[0], a[1], a[2]};
      else {
        cfg.params.amplitude = {a[0], a[0], a[0]};
        cfg.params.randomAmplitude = a[0];
      }
    }
    if (*alphaOpt) cfg.params.alpha0Case2 = cfg.params.alpha0Case5 = cfg.params.alpha0Rotation = alpha0;
    if (*radiusOpt) cfg.params.radius = radius;
    cfg.freestream = freestream == "on";
    cfg.timing = timing == "on";
    cfg.split = split == "face" ? DirectionSplit::FaceFamily : DirectionSplit::VelocityComponent;

    int rc;
    if (cfg.out.empty()) {
      rc = cmd_run(cfg, std::cout);
      if (rc == kExitIo) error_line(kExitIo, "io", "cannot write to stdout");
    } else {
      std::ostringstream buf;
      rc = cmd_run(cfg, buf);
      std::ofstream f(cfg.out, std::ios::binary);
      f << buf.str();
      f.close();
      if (!f) {
        error_line(kExitIo, "io", "cannot write " + cfg.out);
        return kExitIo;
      }
    }
    if (rc == kExitDivergence) error_line(rc, "divergence", "freestream solver diverged for at least one row");
    return rc;
  } catch (const ConfigError& e) {
    error_line(kExitConfig, "config", e.what());
    return kExitConfig;
  } catch (const DegenerateMeshError& e) {
    error_line(kExitDegenerate, "degenerate", e.what());
    return kExitDegenerate;
  } catch (const SingularSystemError& e) {
    error_line(kExitConfig, "config", e.what());
    return kExitConfig;
  }
}
