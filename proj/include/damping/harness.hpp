#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "damping/evolution.hpp"
#include "damping/profiles.hpp"

namespace damping {

// One structured config drives every experiment kind.
struct RunConfig {
  // profile
  std::string profile_kind = "couette";  // couette | bump
  double amplitude = 0.05;
  double shape_a = 3.0;
  double theta0 = 0.08;
  double theta1 = 0.025;
  double s = 0.5;
  // initial data (Gaussian-Gevrey bump)
  double center = 0.5;
  double width = 0.5;
  double data_a = 0.25;
  // solver
  int n = 1024;
  double dt = 0.0;  // 0 = CFL bound
  double T = 50.0;
  double snap_every = 1.0;
  std::vector<int> kset = {1};
  // weights
  double lambda = 0.2;
  double lambda_prime = 0.16;
  // spectral
  std::vector<double> eps_schedule = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  int kmax = 16;
  std::vector<double> compare_times = {0.0, 10.0, 20.0};
  // plumbing
  std::uint64_t seed = 20260826ULL;
  std::string out_dir = "out";

  static RunConfig from_json_file(const std::string& path);
  static RunConfig from_json_text(const std::string& text);
  std::string to_json() const;
  ShearProfile make_profile() const;
};

struct LedgerEntry {
  std::string experiment;
  bool pass = false;
  std::string detail;
};

struct RunArtifact {
  std::string manifest_json;
  std::vector<LedgerEntry> ledger;
  bool all_pass = true;
};

// Executes the requested experiments (evolve | spectral | compare | scan |
// gevrey-props), writes CSV/JSON artifacts under cfg.out_dir.
RunArtifact run(const RunConfig& cfg, const std::vector<std::string>& experiments);

struct CompareRow {
  int k = 1;
  double t = 0.0;
  double rel_spectral = 0.0;  // stepper vs representation formula
  double rel_theta = 0.0;     // stepper vs the Theta-route reconstruction
};

// Relative L^2 distances between the time stepper and the spectral
// representation (and the Theta route) at cfg.compare_times for each k.
std::vector<CompareRow> compare_solvers(const RunConfig& cfg);

// Decay-curve CSVs, a gnuplot script referencing only the CSVs, and the
// summary table of fitted exponents against the asserted reference rates.
void emit_report(const RunArtifact& artifact, const std::string& out_dir);

// Binary snapshot layout: int32 k, int32 n, float64 t, uint32 endian tag
// 0x01020304, then (n+1) interleaved re/im float64 pairs.
void write_snapshot_binary(const std::string& path, int k, double t,
                           const std::vector<cplx>& field);
std::vector<cplx> read_snapshot_binary(const std::string& path, int& k, double& t);

// 17-significant-digit scientific formatting shared by all CSV writers.
std::string csv_num(double x);

}  // namespace damping
