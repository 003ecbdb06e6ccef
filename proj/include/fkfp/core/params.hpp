#pragma once

#include <optional>

namespace fkfp {

// Analytic parameter pack for
//   d/dt f + v.grad_x f + L_v^alpha f = div_v(f grad_v L_v^{-beta} f)
// in the regime beta in (0,1), alpha in (1,2), alpha + beta > 2. alpha = 2 is
// additionally accepted as the classical-diffusion reference case used by the
// oracle paths.
struct Params {
  double alpha = 1.5;
  double beta = 0.8;
  int d = 1;                      // spatial dimension (phase space is 2d)
  double gamma = 0.85;            // Holder exponent, alpha-1 < gamma < 2-beta
  int max_deriv = 2;              // derivative-order cap in norms/checks

  double kappa() const { return (alpha + beta - 2.0) / alpha; }
  double gamma0() const { return gamma + 1.0 - alpha; }

  // critical seed-norm weight exponent 1 + (beta-2)/alpha
  double seed_exponent() const { return 1.0 + (beta - 2.0) / alpha; }

  // throws std::invalid_argument naming the offending field
  void validate() const;

  // gamma defaulted to the admissible midpoint (alpha-1 + 2-beta)/2
  static Params make(double alpha, double beta, int d = 1, int max_deriv = 2,
                     std::optional<double> gamma = std::nullopt);
};

}  // namespace fkfp
