#include "fkfp/core/params.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fkfp {

void Params::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("params." + field + ": " + why);
  };
  if (!(alpha > 1.0 && alpha <= 2.0)) fail("alpha", "must lie in (1, 2]");
  if (!(beta > 0.0 && beta < 1.0)) fail("beta", "must lie in (0, 1)");
  if (!(alpha + beta > 2.0)) fail("beta", "alpha + beta must exceed 2");
  if (!(kappa() > 0.0)) fail("alpha", "kappa = (alpha+beta-2)/alpha must be positive");
  if (d != 1 && d != 2) fail("d", "only d = 1 or 2 are supported");
  if (!(gamma > alpha - 1.0 && gamma < 2.0 - beta)) fail("gamma", "must lie in (alpha-1, 2-beta)");
  const double g0 = gamma0();
  if (!(g0 > 0.0 && g0 < std::min(1.0, gamma))) fail("gamma", "gamma0 = gamma+1-alpha out of range");
  if (max_deriv < 1) fail("max_deriv", "must be >= 1");
}

Params Params::make(double alpha, double beta, int d, int max_deriv, std::optional<double> gamma) {
  Params p;
  p.alpha = alpha;
  p.beta = beta;
  p.d = d;
  p.max_deriv = max_deriv;
  p.gamma = gamma ? *gamma : 0.5 * ((alpha - 1.0) + (2.0 - beta));
  p.validate();
  return p;
}

}  // namespace fkfp
