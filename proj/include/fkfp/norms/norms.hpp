#pragma once

#include <vector>

#include "fkfp/core/field.hpp"
#include "fkfp/core/params.hpp"

namespace fkfp::norms {

// Discrete nets replacing the continuous sups: dyadic times 2^k, k in [-6,4],
// for sup_{t>0}; dyadic shifts box*2^{-k}, k in [1,10], per axis for sup_a.
struct NormConfig {
  std::vector<double> sup_times;
  std::vector<double> shifts_rel;
  int max_deriv = 2;

  static NormConfig defaults(int max_deriv = 2);
  // trimmed net for Picard stopping (cheaper, same structure)
  static NormConfig stopping(int max_deriv = 1);
};

// sup_a ||delta_a^x f||_inf / |a|^{ex} + sup_b ||delta_b^v f||_inf / |b|^{ev}
// over per-axis shift sets (absolute sizes).
double holder_seminorm(const SpectralField& fhat, double ex, double ev,
                       const std::vector<double>& xshifts, const std::vector<double>& vshifts);

// convenience: shift sets from relative config sizes
double holder_seminorm(const SpectralField& fhat, double ex, double ev, const NormConfig& cfg);

struct Sample {
  double t;
  const SpectralField* spec;
};

// sup_t [ t^kappa ||f||_inf + sum_{m+n<=A} t^{kappa+m+(m+n+gamma)/alpha}
//         ||grad_x^m grad_v^n f||_{C^{gamma/(1+alpha),gamma}} ]
double x_norm(const std::vector<Sample>& traj, const Params& p, const NormConfig& cfg);

// force counterpart: sup_t sum_{m+n<=A} t^{kappa+1+(m(1+alpha)+n-1+gamma0)/alpha}
// ||grad^m grad^n F||_{C^{gamma0/(1+alpha),gamma0}}, max over components
double force_norm(const std::vector<double>& times,
                  const std::vector<std::vector<const SpectralField*>>& comps, const Params& p,
                  const NormConfig& cfg);

// seed norm sup_t t^{1+(beta-2)/alpha} ||e^{-tP} f0||_inf over the time net
double seed_norm(const SpectralField& f0hat, const Params& p, const NormConfig& cfg);

// multi-index enumeration helper (all compositions of `order` into d parts)
std::vector<std::vector<int>> multi_indices(int d, int order);

}  // namespace fkfp::norms
