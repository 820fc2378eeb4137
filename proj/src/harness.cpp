#include "damping/harness.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "damping/gevrey.hpp"
#include "damping/greens.hpp"
#include "damping/spectral.hpp"

namespace damping {

using nlohmann::json;

namespace {

json to_json_obj(const RunConfig& c) {
  return json{{"profile",
               {{"kind", c.profile_kind},
                {"amplitude", c.amplitude},
                {"a", c.shape_a},
                {"theta0", c.theta0},
                {"theta1", c.theta1},
                {"s", c.s}}},
              {"data", {{"center", c.center}, {"width", c.width}, {"a", c.data_a}}},
              {"solver",
               {{"n", c.n}, {"dt", c.dt}, {"T", c.T}, {"snap_every", c.snap_every},
                {"kset", c.kset}}},
              {"weights", {{"lambda", c.lambda}, {"lambda_prime", c.lambda_prime}}},
              {"spectral",
               {{"eps_schedule", c.eps_schedule},
                {"kmax", c.kmax},
                {"compare_times", c.compare_times}}},
              {"seed", c.seed},
              {"out_dir", c.out_dir}};
}

void from_json_obj(const json& j, RunConfig& c) {
  if (j.contains("profile")) {
    const auto& p = j["profile"];
    c.profile_kind = p.value("kind", c.profile_kind);
    c.amplitude = p.value("amplitude", c.amplitude);
    c.shape_a = p.value("a", c.shape_a);
    c.theta0 = p.value("theta0", c.theta0);
    c.theta1 = p.value("theta1", c.theta1);
    c.s = p.value("s", c.s);
  }
  if (j.contains("data")) {
    const auto& d = j["data"];
    c.center = d.value("center", c.center);
    c.width = d.value("width", c.width);
    c.data_a = d.value("a", c.data_a);
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    c.n = s.value("n", c.n);
    c.dt = s.value("dt", c.dt);
    c.T = s.value("T", c.T);
    c.snap_every = s.value("snap_every", c.snap_every);
    c.kset = s.value("kset", c.kset);
  }
  if (j.contains("weights")) {
    const auto& w = j["weights"];
    c.lambda = w.value("lambda", c.lambda);
    c.lambda_prime = w.value("lambda_prime", c.lambda_prime);
  }
  if (j.contains("spectral")) {
    const auto& s = j["spectral"];
    c.eps_schedule = s.value("eps_schedule", c.eps_schedule);
    c.kmax = s.value("kmax", c.kmax);
    c.compare_times = s.value("compare_times", c.compare_times);
  }
  c.seed = j.value("seed", c.seed);
  c.out_dir = j.value("out_dir", c.out_dir);
  if (!(c.lambda_prime < c.lambda))
    throw std::invalid_argument("config: lambda_prime must be < lambda");
}

double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (size_t j = 0; j < a.size(); ++j) {
    num += std::norm(a[j] - b[j]);
    den += std::norm(b[j]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

std::string csv_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  RunConfig c;
  from_json_obj(json::parse(text), c);
  return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string RunConfig::to_json() const { return to_json_obj(*this).dump(2); }

ShearProfile RunConfig::make_profile() const {
  if (profile_kind == "couette") return make_couette();
  if (profile_kind == "bump")
    return make_bump_profile(amplitude, shape_a, theta0, theta1, s);
  throw std::invalid_argument("config: unknown profile kind " + profile_kind);
}

void write_snapshot_binary(const std::string& path, int k, double t,
                           const std::vector<cplx>& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("snapshot: cannot open " + path);
  const std::int32_t ki = k, ni = static_cast<std::int32_t>(field.size()) - 1;
  const std::uint32_t tag = 0x01020304u;
  out.write(reinterpret_cast<const char*>(&ki), 4);
  out.write(reinterpret_cast<const char*>(&ni), 4);
  out.write(reinterpret_cast<const char*>(&t), 8);
  out.write(reinterpret_cast<const char*>(&tag), 4);
  for (const auto& v : field) {
    const double re = v.real(), im = v.imag();
    out.write(reinterpret_cast<const char*>(&re), 8);
    out.write(reinterpret_cast<const char*>(&im), 8);
  }
}

std::vector<cplx> read_snapshot_binary(const std::string& path, int& k, double& t) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path);
  std::int32_t ki = 0, ni = 0;
  std::uint32_t tag = 0;
  in.read(reinterpret_cast<char*>(&ki), 4);
  in.read(reinterpret_cast<char*>(&ni), 4);
  in.read(reinterpret_cast<char*>(&t), 8);
  in.read(reinterpret_cast<char*>(&tag), 4);
  if (tag != 0x01020304u) throw std::runtime_error("snapshot: endian tag mismatch");
  k = ki;
  std::vector<cplx> field(ni + 1);
  for (auto& v : field) {
    double re = 0, im = 0;
    in.read(reinterpret_cast<char*>(&re), 8);
    in.read(reinterpret_cast<char*>(&im), 8);
    v = cplx(re, im);
  }
  return field;
}

std::vector<CompareRow> compare_solvers(const RunConfig& cfg) {
  const ShearProfile p = cfg.make_profile();
  const CoordinateMap map = build_map(p);
  // The eps-extrapolation residual (~ eps_min^3) dominates the relative
  // error against the Orr-decaying stream function, so the schedule is
  // deepened to 2^-9, which requires n = 4096 to clear the resolution floor.
  const int n = 4096;
  std::vector<double> eps = cfg.eps_schedule;
  while (eps.back() > 1.9 / 512.0) eps.push_back(eps.back() / 2.0);
  const auto omega0 = gaussian_gevrey_bump(p, n, cfg.center, cfg.width, cfg.data_a);
  const double h = 1.0 / n;

  double tmax = 0.0;
  for (double t : cfg.compare_times) tmax = std::max(tmax, t);

  std::vector<CompareRow> rows;
  for (int k : cfg.kset) {
    const auto trajs = evolve(p, omega0, {k}, tmax, 0.0, 1.0);
    const Trajectory& traj = trajs.front();
    const ThetaField theta =
        theta_transform(p, map, k, omega0, eps, 512, 128);
    for (double t : cfg.compare_times) {
      const Snapshot* snap = nullptr;
      for (const auto& s : traj.snaps)
        if (std::abs(s.t - t) < 1e-9) snap = &s;
      if (!snap) throw std::runtime_error("compare_solvers: missing snapshot");
      const auto psi_rep = assemble_stream(p, t, k, omega0, eps);
      CompareRow row;
      row.k = k;
      row.t = t;
      row.rel_spectral = rel_l2(psi_rep, snap->psi);
      // Theta route reconstructs Psi * psi; compare on that localization
      std::vector<double> vgrid(n + 1);
      std::vector<cplx> loc(n + 1);
      for (int j = 0; j <= n; ++j) {
        vgrid[j] = p.b(j * h);
        loc[j] = map.Psi(vgrid[j]) * snap->psi[j];
      }
      const auto psi_theta = theta_route_stream(theta, t, vgrid);
      row.rel_theta = rel_l2(psi_theta, loc);
      rows.push_back(row);
    }
  }
  return rows;
}

RunArtifact run(const RunConfig& cfg, const std::vector<std::string>& experiments) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  RunArtifact art;
  const ShearProfile p = cfg.make_profile();

  for (const auto& exp : experiments) {
    LedgerEntry entry;
    entry.experiment = exp;
    try {
      if (exp == "evolve") {
        const CoordinateMap map = build_map(p);
        const auto omega0 = gaussian_gevrey_bump(p, cfg.n, cfg.center, cfg.width, cfg.data_a);
        const auto trajs = evolve(p, omega0, cfg.kset, cfg.T, cfg.dt, cfg.snap_every);
        GevreyWeight wp{cfg.lambda_prime, cfg.s, std::nullopt};
        for (const auto& traj : trajs) {
          const auto hist = gevrey_norm_history(map, traj, wp, 2048);
          std::ofstream csv(cfg.out_dir + "/evolve_k" + std::to_string(traj.k) + ".csv");
          csv << "t,psi_norm,ux_norm,uy_norm,lambda_t\n";
          for (size_t i = 0; i < traj.snaps.size(); ++i) {
            const auto& s = traj.snaps[i];
            csv << csv_num(s.t) << ',' << csv_num(s.psi_norm) << ',' << csv_num(s.ux_norm)
                << ',' << csv_num(s.uy_norm) << ',' << csv_num(hist[i].second) << '\n';
          }
          write_snapshot_binary(cfg.out_dir + "/final_k" + std::to_string(traj.k) + ".bin",
                                traj.k, traj.snaps.back().t, traj.snaps.back().omega);
          const auto e = orr_exponents(traj);
          std::ostringstream d;
          d << "k=" << traj.k << " psi=" << e.psi << " ux=" << e.ux << " uy=" << e.uy;
          entry.detail += d.str() + "; ";
        }
        entry.pass = true;
      } else if (exp == "compare" || exp == "spectral") {
        const auto rows = compare_solvers(cfg);
        std::ofstream csv(cfg.out_dir + "/compare.csv");
        csv << "k,t,rel_spectral,rel_theta\n";
        entry.pass = true;
        for (const auto& r : rows) {
          csv << r.k << ',' << csv_num(r.t) << ',' << csv_num(r.rel_spectral) << ','
              << csv_num(r.rel_theta) << '\n';
          if (r.rel_spectral > 1e-2) entry.pass = false;
        }
      } else if (exp == "scan") {
        const auto rep = embedded_eigenvalue_scan(p, cfg.kmax);
        std::ofstream js(cfg.out_dir + "/scan.json");
        js << rep.to_json() << '\n';
        entry.pass = rep.pass;
        entry.detail = rep.to_json();
      } else if (exp == "gevrey-props") {
        GevreyWeight w{cfg.lambda, cfg.s, std::nullopt};
        const auto rep = verify_weight_inequalities(w, 10000, cfg.seed);
        std::ofstream js(cfg.out_dir + "/gevrey_props.json");
        js << rep.to_json() << '\n';
        entry.pass = rep.pass;
        entry.detail = rep.to_json();
      } else if (exp == "check-profile") {
        const auto rep = check_assumptions(p, cfg.s, cfg.lambda);
        std::ofstream js(cfg.out_dir + "/profile_report.json");
        js << rep.to_json() << '\n';
        entry.pass = rep.pass;
        entry.detail = rep.first_violation;
      } else {
        throw std::invalid_argument("unknown experiment: " + exp);
      }
    } catch (const std::exception& e) {
      entry.pass = false;
      entry.detail = e.what();
    }
    art.all_pass = art.all_pass && entry.pass;
    art.ledger.push_back(std::move(entry));
  }

  json manifest;
  manifest["config"] = json::parse(cfg.to_json());
  manifest["experiments"] = json::array();
  for (const auto& e : art.ledger)
    manifest["experiments"].push_back({{"id", e.experiment}, {"pass", e.pass},
                                       {"detail", e.detail}});
  art.manifest_json = manifest.dump(2);
  std::ofstream mf(cfg.out_dir + "/manifest.json");
  mf << art.manifest_json << '\n';
  return art;
}

void emit_report(const RunArtifact& artifact, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  // reference rates the fitted exponents are compared against
  {
    std::ofstream csv(out_dir + "/reference_rates.csv");
    csv << "quantity,rate\n";
    csv << "psi," << csv_num(-2.0) << '\n';
    csv << "ux," << csv_num(-1.0) << '\n';
    csv << "uy," << csv_num(-2.0) << '\n';
    csv << "scattering," << csv_num(-1.0) << '\n';
    csv << "Tnorm_exponent," << csv_num(-1.0 / 3.0) << '\n';
  }
  {
    std::ofstream csv(out_dir + "/summary.csv");
    csv << "experiment,pass,detail\n";
    for (const auto& e : artifact.ledger) {
      std::string d = e.detail;
      for (auto& ch : d)
        if (ch == ',' || ch == '\n') ch = ';';
      csv << e.experiment << ',' << (e.pass ? 1 : 0) << ',' << d << '\n';
    }
  }
  {
    std::ofstream gp(out_dir + "/decay.gp");
    gp << "set logscale xy\nset xlabel 't'\nset ylabel 'norm'\n"
          "plot 'evolve_k1.csv' using 1:2 with lines title 'psi', \\\n"
          "     'evolve_k1.csv' using 1:3 with lines title 'ux', \\\n"
          "     'evolve_k1.csv' using 1:4 with lines title 'uy'\n";
  }
}

}  // namespace damping
