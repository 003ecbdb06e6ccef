#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fkfp/core/params.hpp"
#include "fkfp/verify/verify.hpp"

namespace fkfp::cli {

// invalid configuration; `field` names the offending key
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(const std::string& f, const std::string& why)
      : std::runtime_error("config error at '" + f + "': " + why), field(f) {}
};

struct RunConfig {
  // [params]
  double alpha = 1.5, beta = 0.8;
  int d = 1;
  double gamma = 0.0;  // 0 = admissible midpoint
  int max_deriv = 2;
  // [grid]
  int nx = 256, nv = 256;
  double Lx = 20.0, Lv = 20.0;
  // [time]
  std::string time_kind = "dyadic";  // dyadic | uniform
  double horizon = 1.0;
  int samples = 8;
  int duhamel_j = 32;
  int grade_p = 3;
  // [solver]
  double tol_rel = 1e-8;
  int max_iter = 12;
  double sigma = 0.05;
  std::uint64_t cache_mb = 256;
  // [data]
  std::string family = "gaussian";
  double amplitude = 0.005;
  double sigx = 1.0, sigv = 1.0;
  std::uint64_t seed = 12345;
  // [kernel]
  std::vector<double> kernel_times = {0.25, 1.0, 4.0};
  int kernel_nx = 512, kernel_nv = 256;
  // [run]
  std::string out_dir;  // empty: $FKFP_OUTPUT_ROOT or ./fkfp-out
  int threads = 0;      // 0 = auto
  std::string simd;     // empty = auto; scalar | avx2 | neon
  std::vector<std::string> experiments;  // empty = all

  Params params() const;          // validated
  std::string output_root() const;
  void validate() const;          // throws ConfigError
};

// TOML-style subset: [section], key = value (number, "string", true/false,
// [v1, v2, ...]), # comments. Unknown keys are rejected.
RunConfig parse_config_file(const std::string& path);
void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

verify::ExperimentConfig to_experiment_config(const RunConfig& cfg);

}  // namespace fkfp::cli
