#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fkfp/cli/config.hpp"
#include "fkfp/cli/runner.hpp"

// Exit codes: 0 all enabled checks passed, 1 runtime failure or failed checks,
// 2 invalid configuration (the message names the offending field).

int main(int argc, char** argv) {
  CLI::App app{"fkfp: fractional kinetic Fokker-Planck solver and verification lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::vector<std::string> experiments;
  std::string out_dir, simd;
  int threads = -1;
  long long seed = -1;

  app.add_option("--config", config_path, "configuration file (TOML-style sections)");
  app.add_option("--set", overrides, "override a config key, e.g. --set grid.nx=128")
      ->type_name("KEY=VALUE");
  app.add_option("--out", out_dir, "output directory (default $FKFP_OUTPUT_ROOT or ./fkfp-out)");
  app.add_option("--threads", threads, "thread cap (default: auto)");
  app.add_option("--simd", simd, "force a kernels backend: scalar | avx2 | neon");
  app.add_option("--seed", seed, "random-data seed");

  auto* sub_kernel = app.add_subcommand("kernel", "kernel snapshots, mass/positivity checks");
  auto* sub_solve = app.add_subcommand("solve", "Picard solve, trajectory export");
  auto* sub_norms = app.add_subcommand("norms", "seed norm / X norm report for the data family");
  auto* sub_verify = app.add_subcommand("verify", "run verification experiments");
  auto* sub_all = app.add_subcommand("all", "kernel + solve + norms + verify");
  sub_verify->add_option("--experiment", experiments, "experiment id (repeatable; default: all)");
  for (auto* s : {sub_kernel, sub_solve, sub_norms, sub_verify, sub_all}) s->fallthrough();

  CLI11_PARSE(app, argc, argv);

  std::string subcommand;
  for (auto* s : {sub_kernel, sub_solve, sub_norms, sub_verify, sub_all})
    if (s->parsed()) subcommand = s->get_name();

  fkfp::cli::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = fkfp::cli::parse_config_file(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw fkfp::cli::ConfigError(kv, "expected KEY=VALUE in --set");
      fkfp::cli::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads >= 0) cfg.threads = threads;
    if (!simd.empty()) cfg.simd = simd;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!experiments.empty()) cfg.experiments = experiments;
    cfg.validate();
  } catch (const fkfp::cli::ConfigError& e) {
    std::cerr << "fkfp: " << e.what() << "\n";
    return 2;
  }

  try {
    return fkfp::cli::dispatch(cfg, subcommand, std::cout) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "fkfp: runtime failure: " << e.what() << "\n";
    std::cerr << "fkfp: partial outputs (if any) under " << cfg.output_root() << "\n";
    return 1;
  }
}
