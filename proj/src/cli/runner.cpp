#include "fkfp/cli/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "fkfp/core/threading.hpp"
#include "fkfp/io/array_io.hpp"
#include "fkfp/lab/kernel_lab.hpp"
#include "fkfp/norms/norms.hpp"
#include "fkfp/simd/kernels.hpp"
#include "fkfp/solver/solver.hpp"
#include "fkfp/verify/report.hpp"
#include "fkfp/verify/verify.hpp"

#ifndef FKFP_VERSION
#define FKFP_VERSION "1.0.0"
#endif

namespace fkfp::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct StepTimer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double sec() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void write_json(const std::string& path, const ordered_json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  os << j.dump(2) << "\n";
}

solver::TimeGrid make_time_grid(const RunConfig& cfg) {
  solver::TimeGrid tg = cfg.time_kind == "uniform"
                            ? solver::TimeGrid::uniform(cfg.horizon, cfg.samples)
                            : solver::TimeGrid::dyadic(cfg.horizon, cfg.samples);
  tg.duhamel_j = cfg.duhamel_j;
  tg.grade_p = cfg.grade_p;
  return tg;
}

int run_kernel(const RunConfig& cfg, const std::string& out, std::ostream& log,
               ordered_json& manifest) {
  const Params p = cfg.params();
  fs::create_directories(out + "/kernel");
  std::ofstream csv(out + "/kernel/kernel.csv", std::ios::binary);
  csv << "t,mass,min_over_sup,sup,imag_residue,box_ok\n";
  ordered_json jrep = ordered_json::array();
  bool ok = true;
  int idx = 0;
  for (double t : cfg.kernel_times) {
    auto g = lab::kernel_grid(t, p, cfg.kernel_nx, cfg.kernel_nv);
    auto snap = lab::kernel_snapshot(t, {}, g, p);
    const double mass = cell_sum(snap.field);
    double mn = snap.field.v[0];
    for (double v : snap.field.v) mn = std::fmin(mn, v);
    const double sup = sup_norm(snap.field);
    const bool pass = std::fabs(mass - 1.0) <= 1e-12 && mn / sup >= -1e-8;
    ok = ok && pass;
    if (snap.box_warning) log << "warning: box below the tail rule at t=" << t << "\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", t, mass, mn / sup, sup,
                  snap.imag_residue, snap.box_warning ? 0 : 1);
    csv << buf;
    char name[64];
    std::snprintf(name, sizeof name, "kernel_%02d.fkfp", idx++);
    io::save_field(out + "/kernel/" + name, snap.field, t, 0);
    jrep.push_back({{"t", t}, {"mass", mass}, {"min_over_sup", mn / sup}, {"pass", pass}});
  }
  write_json(out + "/kernel/kernel.json", {{"snapshots", jrep}});
  manifest["kernel"] = {{"times", cfg.kernel_times}, {"pass", ok}};
  log << "kernel: " << (ok ? "ok" : "FAILED") << "\n";
  return ok ? 0 : 1;
}

int run_solve(const RunConfig& cfg, const std::string& out, std::ostream& log,
              ordered_json& manifest) {
  const Params p = cfg.params();
  auto grid = make_grid(p.d, cfg.nx, cfg.nv, cfg.Lx, cfg.Lv);
  if (!box_large_enough(*grid, cfg.horizon, p))
    log << "warning: box below the tail rule at the horizon (Lx >= " << tail_rule_Lx(cfg.horizon, p)
        << ", Lv >= " << tail_rule_Lv(cfg.horizon, p) << " needed)\n";
  PhaseField f0 =
      verify::family_field(cfg.family, grid, p, cfg.amplitude, cfg.sigx, cfg.sigv, cfg.seed);
  solver::TimeGrid tg = make_time_grid(cfg);
  solver::PicardOptions opt;
  opt.tol = cfg.tol_rel * cfg.amplitude;
  opt.max_iter = cfg.max_iter;
  opt.smallness_sigma = cfg.sigma;
  opt.cache_mb = cfg.cache_mb;
  auto [traj, diag] = solver::picard_solve(f0, tg, p, opt);

  fs::create_directories(out + "/solve");
  io::save_trajectory(out + "/solve/trajectory", traj);
  ordered_json jd;
  jd["converged"] = diag.converged;
  jd["iterations"] = diag.iterations;
  jd["increments"] = diag.increments;
  jd["ratios"] = diag.ratios;
  jd["residual_sup"] = diag.residual_sup;
  jd["quad_error_est"] = diag.quad_error_est;
  jd["mesh_too_coarse"] = diag.mesh_too_coarse;
  jd["seed_norm"] = diag.seed_norm_value;
  jd["seed_norm_warning"] = diag.seed_norm_warning;
  write_json(out + "/solve/diagnostics.json", jd);
  if (diag.seed_norm_warning)
    log << "warning: seed norm " << diag.seed_norm_value << " above the smallness threshold "
        << cfg.sigma << "\n";
  manifest["solve"] = {{"converged", diag.converged}, {"iterations", diag.iterations}};
  log << "solve: " << (diag.converged ? "converged" : "NOT CONVERGED") << " in "
      << diag.iterations << " iterations, residual " << diag.residual_sup << "\n";
  return diag.converged ? 0 : 1;
}

int run_norms(const RunConfig& cfg, const std::string& out, std::ostream& log,
              ordered_json& manifest) {
  const Params p = cfg.params();
  auto grid = make_grid(p.d, cfg.nx, cfg.nv, cfg.Lx, cfg.Lv);
  PhaseField f0 =
      verify::family_field(cfg.family, grid, p, cfg.amplitude, cfg.sigx, cfg.sigv, cfg.seed);
  const auto ncfg = norms::NormConfig::defaults(p.max_deriv);
  SpectralField f0hat = to_spectral(f0);

  const double seed = norms::seed_norm(f0hat, p, ncfg);
  const double holder = norms::holder_seminorm(f0hat, p.gamma / (1.0 + p.alpha), p.gamma, ncfg);
  solver::TimeGrid tg = make_time_grid(cfg);
  solver::Trajectory lin = solver::linear_trajectory(f0, tg, p);
  const double xnorm = norms::x_norm(lin.samples(), p, ncfg);

  fs::create_directories(out + "/norms");
  std::ofstream csv(out + "/norms/norms.csv", std::ios::binary);
  csv << "quantity,value\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "seed_norm,%.17g\n", seed);
  csv << buf;
  std::snprintf(buf, sizeof buf, "holder_seminorm_f0,%.17g\n", holder);
  csv << buf;
  std::snprintf(buf, sizeof buf, "x_norm_linear,%.17g\n", xnorm);
  csv << buf;
  write_json(out + "/norms/norms.json",
             {{"seed_norm", seed}, {"holder_seminorm_f0", holder}, {"x_norm_linear", xnorm}});
  manifest["norms"] = {{"seed_norm", seed}, {"x_norm_linear", xnorm}};
  log << "norms: [f0]=" << seed << "  ||hL||_X=" << xnorm << "\n";
  return 0;
}

int run_verify(const RunConfig& cfg, const std::string& out, std::ostream& log,
               ordered_json& manifest) {
  fs::create_directories(out + "/verify");
  std::vector<std::string> ids = cfg.experiments;
  if (ids.empty()) {
    ids = verify::experiment_ids();
    ids.push_back("reproducibility");
  }
  const verify::ExperimentConfig ecfg = to_experiment_config(cfg);
  std::vector<verify::VerdictReport> reports;
  ordered_json timings;
  bool ok = true;
  for (const auto& id : ids) {
    verify::VerdictReport rep;
    if (id == "reproducibility") {
      StepTimer t;
      std::string detail;
      const bool pass = reproducibility_check(cfg, out + "/verify/repro", log, &detail);
      rep.id = "reproducibility";
      rep.criteria.push_back(verify::crit_ge("byte-identical reports across reruns and thread counts",
                                             pass ? 1.0 : 0.0, 1.0));
      if (!pass) log << "reproducibility mismatch: " << detail << "\n";
      rep.runtime_sec = t.sec();
    } else {
      rep = verify::run_experiment(id, ecfg);
    }
    for (const auto& c : rep.criteria) log << verify::format_criterion_line(rep, c) << "\n";
    verify::write_verdict_json(out + "/verify/" + rep.id + ".verdict.json", rep);
    if (!rep.fits_csv.empty()) {
      std::ofstream fcsv(out + "/verify/" + rep.id + ".fits.csv", std::ios::binary);
      fcsv << rep.fits_csv;
    }
    verify::write_plot_data(out + "/verify", rep);
    timings[rep.id] = rep.runtime_sec;
    ok = ok && rep.pass();
    reports.push_back(std::move(rep));
  }
  verify::write_summary_csv(out + "/verify/summary.csv", reports);
  verify::write_plot_script(out + "/verify");
  manifest["verify"] = {{"experiments", ids}, {"pass", ok}, {"runtimes_sec", timings}};
  log << "verify: " << (ok ? "all experiments passed" : "FAILURES present") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int dispatch(const RunConfig& cfg, const std::string& subcommand, std::ostream& log) {
  if (cfg.threads > 0) set_max_threads(cfg.threads);
  if (!cfg.simd.empty() && !simd::select_backend(cfg.simd.c_str()))
    throw std::runtime_error("simd backend '" + cfg.simd + "' unavailable on this machine");

  const std::string out = cfg.output_root();
  fs::create_directories(out);
  ordered_json manifest;
  manifest["version"] = FKFP_VERSION;
  manifest["subcommand"] = subcommand;
  manifest["simd_backend"] = simd::backend().name;
  manifest["threads"] = max_threads();
  {
    const auto now = std::chrono::system_clock::now();
    manifest["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  }
  manifest["config"] = {{"alpha", cfg.alpha},   {"beta", cfg.beta},       {"d", cfg.d},
                        {"nx", cfg.nx},         {"nv", cfg.nv},           {"Lx", cfg.Lx},
                        {"Lv", cfg.Lv},         {"horizon", cfg.horizon}, {"samples", cfg.samples},
                        {"family", cfg.family}, {"amplitude", cfg.amplitude}, {"seed", cfg.seed}};

  StepTimer total;
  int status = 0;
  auto step = [&](const char* name, auto&& fn) {
    StepTimer t;
    const int s = fn();
    manifest["timings_sec"][name] = t.sec();
    status = status == 0 ? s : status;
  };
  if (subcommand == "kernel" || subcommand == "all")
    step("kernel", [&] { return run_kernel(cfg, out, log, manifest); });
  if (subcommand == "solve" || subcommand == "all")
    step("solve", [&] { return run_solve(cfg, out, log, manifest); });
  if (subcommand == "norms" || subcommand == "all")
    step("norms", [&] { return run_norms(cfg, out, log, manifest); });
  if (subcommand == "verify" || subcommand == "all")
    step("verify", [&] { return run_verify(cfg, out, log, manifest); });
  manifest["total_sec"] = total.sec();
  write_json(out + "/manifest.json", manifest);
  return status;
}

// ---- reproducibility pack -------------------------------------------------------

namespace {

void run_pack(const RunConfig& base, const std::string& out, int threads, std::ostream& log) {
  RunConfig cfg = base;
  cfg.out_dir = out;
  cfg.threads = threads;
  cfg.nx = 32;
  cfg.nv = 32;
  cfg.samples = 4;
  cfg.duhamel_j = 8;
  cfg.experiments = {"interpolation", "kernel-mass"};
  cfg.kernel_times = {0.5, 1.0};
  if (dispatch(cfg, "all", log) != 0) throw std::runtime_error("reproducibility pack run failed");
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::vector<char> ba((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  std::vector<char> bb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  return ba == bb;
}

}  // namespace

bool reproducibility_check(const RunConfig& base, const std::string& out_root, std::ostream& log,
                           std::string* detail) {
  const int saved_threads = max_threads();
  fs::remove_all(out_root);
  run_pack(base, out_root + "/runA", 1, log);
  run_pack(base, out_root + "/runB", 1, log);
  run_pack(base, out_root + "/runC", 2, log);
  set_max_threads(saved_threads);

  std::vector<fs::path> rel;
  for (const auto& e : fs::recursive_directory_iterator(out_root + "/runA"))
    if (e.is_regular_file() && e.path().filename() != "manifest.json")
      rel.push_back(fs::relative(e.path(), out_root + "/runA"));
  std::sort(rel.begin(), rel.end());
  if (rel.empty()) {
    if (detail) *detail = "no files produced";
    return false;
  }
  for (const auto& r : rel) {
    for (const char* other : {"/runB", "/runC"}) {
      const fs::path p0 = fs::path(out_root + "/runA") / r;
      const fs::path p1 = fs::path(out_root + other) / r;
      if (!fs::exists(p1)) {
        if (detail) *detail = "missing " + p1.string();
        return false;
      }
      if (!same_bytes(p0, p1)) {
        if (detail) *detail = "byte mismatch at " + r.string() + " vs" + other;
        return false;
      }
    }
  }
  return true;
}

}  // namespace fkfp::cli
