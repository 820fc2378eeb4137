// Command-line front end: profile checks, kernel decay, weight/cutoff
// property suites, evolution runs, spectral comparisons, scans, and reports.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "damping/gevrey.hpp"
#include "damping/greens.hpp"
#include "damping/harness.hpp"
#include "damping/spectral.hpp"

using namespace damping;

namespace {

RunConfig load_config(const std::string& path, const std::string& out,
                      std::uint64_t seed) {
  RunConfig cfg;
  if (!path.empty()) cfg = RunConfig::from_json_file(path);
  if (!out.empty())
    cfg.out_dir = out;
  else if (const char* root = std::getenv("DAMPING_OUT_ROOT"))
    cfg.out_dir = std::string(root) + "/" + cfg.out_dir;
  if (seed) cfg.seed = seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inviscid-damping laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "master seed override");
  app.add_option("--jobs", jobs, "worker count (reserved)");

  auto* c_profile = app.add_subcommand("check-profile", "verify profile hypotheses");
  auto* c_greens = app.add_subcommand("greens-decay", "localized kernel transform decay");
  int gd_k = 1, gd_n = 512;
  c_greens->add_option("--k", gd_k);
  c_greens->add_option("--n", gd_n);
  auto* c_gevrey = app.add_subcommand("gevrey-props", "weight inequality property suite");
  auto* c_cutoff = app.add_subcommand("cutoff", "evaluate the Gevrey cutoff to CSV");
  double cu_a = 1.0;
  int cu_n = 4096;
  bool cu_csv = false;
  c_cutoff->add_option("--a", cu_a);
  c_cutoff->add_option("--n", cu_n);
  c_cutoff->add_flag("--csv", cu_csv);
  auto* c_evolve = app.add_subcommand("evolve", "time-domain run with decay diagnostics");
  auto* c_spectral = app.add_subcommand("spectral", "representation-formula solve");
  auto* c_compare = app.add_subcommand("compare", "cross-validate the two solvers");
  auto* c_scan = app.add_subcommand("scan", "embedded-eigenvalue gate");
  auto* c_report = app.add_subcommand("report", "emit summary CSVs and plot scripts");
  auto* c_accept = app.add_subcommand("accept", "full acceptance suite");

  CLI11_PARSE(app, argc, argv);
  RunConfig cfg = load_config(config_path, out_dir, seed);

  try {
    if (c_profile->parsed()) {
      const auto art = run(cfg, {"check-profile"});
      std::cout << art.manifest_json << '\n';
      return art.all_pass ? 0 : 1;
    }
    if (c_greens->parsed()) {
      const ShearProfile p = cfg.make_profile();
      const CoordinateMap map = build_map(p);
      const auto spec = localized_kernel(gd_k, map, gd_n);
      const auto rep = verify_kernel_fourier_decay(spec, cfg.s);
      std::cout << rep.to_json() << '\n';
      return rep.pass ? 0 : 1;
    }
    if (c_gevrey->parsed()) {
      const auto art = run(cfg, {"gevrey-props"});
      std::cout << art.manifest_json << '\n';
      return art.all_pass ? 0 : 1;
    }
    if (c_cutoff->parsed()) {
      if (cu_csv) {
        std::cout << "x,psi_a\n";
        for (int i = 0; i <= cu_n; ++i) {
          const double x = static_cast<double>(i) / cu_n;
          std::cout << csv_num(x) << ',' << csv_num(cutoff_psi(cu_a, x)) << '\n';
        }
        return 0;
      }
      const auto rep = verify_cutoff_decay(cu_a, std::max(cu_n, 4096));
      std::cout << rep.to_json() << '\n';
      return rep.pass ? 0 : 1;
    }
    if (c_evolve->parsed() || c_spectral->parsed() || c_compare->parsed() ||
        c_scan->parsed()) {
      const char* id = c_evolve->parsed()    ? "evolve"
                       : c_spectral->parsed() ? "spectral"
                       : c_compare->parsed()  ? "compare"
                                              : "scan";
      const auto art = run(cfg, {id});
      std::cout << art.manifest_json << '\n';
      return art.all_pass ? 0 : 1;
    }
    if (c_report->parsed()) {
      RunArtifact art;
      emit_report(art, cfg.out_dir);
      return 0;
    }
    if (c_accept->parsed()) {
      const auto art = run(cfg, {"check-profile", "gevrey-props", "evolve", "compare", "scan"});
      emit_report(art, cfg.out_dir);
      std::cout << art.manifest_json << '\n';
      return art.all_pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
