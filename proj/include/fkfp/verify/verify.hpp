#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fkfp/core/field.hpp"
#include "fkfp/core/params.hpp"

namespace fkfp::verify {

// ---- verdicts ----------------------------------------------------------------

struct Criterion {
  std::string name;
  double measured = 0.0;
  double target = 0.0;   // bound or reference value
  double tol = 0.0;      // for abs/rel comparisons
  std::string cmp;       // "le" | "ge" | "abs_le" | "rel_le"
  bool pass = false;
};

Criterion crit_le(const std::string& name, double measured, double bound);
Criterion crit_ge(const std::string& name, double measured, double bound);
Criterion crit_abs(const std::string& name, double measured, double target, double tol);
Criterion crit_rel(const std::string& name, double measured, double target, double reltol);

struct VerdictReport {
  std::string id;
  std::vector<Criterion> criteria;
  std::map<std::string, double> values;  // extra measured quantities
  // plot data: column name -> (x, y) rows
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> curves;
  double runtime_sec = 0.0;  // console/manifest only, never serialized to reports
  std::string fits_csv;      // optional scaling-fit CSV payload

  bool pass() const;
};

// ---- test-data families --------------------------------------------------------

// product Gaussian bump minus its torus mean
PhaseField gaussian_bump(GridPtr g, double amplitude, double sigx, double sigv);
// random-phase multi-mode field with Gaussian spectral decay, sup-normalized
PhaseField multimode(GridPtr g, double amplitude, std::uint64_t seed, int band = 6);
// rough family: |f0_hat| = (1 + P)^{-p}, p = d(2+alpha)/alpha - kappa + 1/10,
// random phases, sup-normalized. The exponent makes t^{kappa}||e^{-tP}f0||
// scale like t^{0.1} as t -> 0: the seed norm is finite but only marginally.
PhaseField rough_marginal(GridPtr g, const Params& p, double amplitude, std::uint64_t seed);

PhaseField family_field(const std::string& name, GridPtr g, const Params& p, double amplitude,
                        double sigx, double sigv, std::uint64_t seed);

// ---- experiments ------------------------------------------------------------------

// Per-experiment resolution/data knobs; the acceptance suite uses the defaults.
struct ExperimentConfig {
  Params params = Params::make(1.5, 0.8);
  int nx = 256, nv = 256;
  double Lx = 20.0, Lv = 20.0;
  double horizon = 1.0;
  int time_k = 8;
  int duhamel_j = 32;
  std::string family = "gaussian";
  double amplitude = 0.005;
  double sigx = 1.0, sigv = 1.0;
  std::uint64_t seed = 12345;
  double sigma_threshold = 0.05;
  std::size_t cache_mb = 256;
};

VerdictReport run_psi_oracle(const ExperimentConfig& cfg);
VerdictReport run_kolmogorov_oracle(const ExperimentConfig& cfg);
VerdictReport run_fourier_ode_oracle(const ExperimentConfig& cfg);
VerdictReport run_kernel_mass(const ExperimentConfig& cfg);
VerdictReport run_pointwise_bound(const ExperimentConfig& cfg);
VerdictReport run_l1_scaling(const ExperimentConfig& cfg, int law);  // law = 1..5
VerdictReport run_interpolation(const ExperimentConfig& cfg);
VerdictReport run_picard(const ExperimentConfig& cfg);
VerdictReport run_cross_oracle(const ExperimentConfig& cfg);
VerdictReport run_scaling_invariance(const ExperimentConfig& cfg);
VerdictReport run_decay_bound(const ExperimentConfig& cfg);
VerdictReport run_bilinear(const ExperimentConfig& cfg);
VerdictReport run_contraction(const ExperimentConfig& cfg);
VerdictReport run_calibrate_sigma(const ExperimentConfig& cfg);

// registry used by the CLI: id -> runner over a default config
std::vector<std::string> experiment_ids();
VerdictReport run_experiment(const std::string& id, const ExperimentConfig& cfg);

}  // namespace fkfp::verify
