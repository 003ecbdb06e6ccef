#include "fkfp/norms/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "fkfp/core/shift.hpp"
#include "fkfp/core/symbols.hpp"

namespace fkfp::norms {

NormConfig NormConfig::defaults(int max_deriv) {
  NormConfig c;
  for (int k = -6; k <= 4; ++k) c.sup_times.push_back(std::exp2(static_cast<double>(k)));
  for (int k = 1; k <= 10; ++k) c.shifts_rel.push_back(std::exp2(static_cast<double>(-k)));
  c.max_deriv = max_deriv;
  return c;
}

NormConfig NormConfig::stopping(int max_deriv) {
  NormConfig c;
  for (int k = -6; k <= 4; ++k) c.sup_times.push_back(std::exp2(static_cast<double>(k)));
  for (int k : {1, 3, 5, 7}) c.shifts_rel.push_back(std::exp2(static_cast<double>(-k)));
  c.max_deriv = max_deriv;
  return c;
}

double holder_seminorm(const SpectralField& fhat, double ex, double ev,
                       const std::vector<double>& xshifts, const std::vector<double>& vshifts) {
  const TorusGrid& g = *fhat.grid;
  double sx = 0.0, sv = 0.0;
  for (int c = 0; c < g.dim(); ++c) {
    const int ax = axis_of(g, AxisKind::X, c);
    for (double a : xshifts) {
      const double s = sup_norm(to_physical(finite_difference_spectral(fhat, ax, a)));
      sx = std::fmax(sx, s / std::pow(a, ex));
    }
    const int av = axis_of(g, AxisKind::V, c);
    for (double b : vshifts) {
      const double s = sup_norm(to_physical(finite_difference_spectral(fhat, av, b)));
      sv = std::fmax(sv, s / std::pow(b, ev));
    }
  }
  return sx + sv;
}

double holder_seminorm(const SpectralField& fhat, double ex, double ev, const NormConfig& cfg) {
  const TorusGrid& g = *fhat.grid;
  std::vector<double> xs, vs;
  for (double r : cfg.shifts_rel) {
    xs.push_back(g.Lx() * r);
    vs.push_back(g.Lv() * r);
  }
  return holder_seminorm(fhat, ex, ev, xs, vs);
}

std::vector<std::vector<int>> multi_indices(int d, int order) {
  std::vector<std::vector<int>> out;
  if (d == 1) {
    out.push_back({order});
  } else {
    for (int a = 0; a <= order; ++a) out.push_back({a, order - a});
  }
  return out;
}

namespace {

// max over multi-index components of the decorated Holder seminorm
double holder_of_derivative(const SpectralField& fhat, int m, int n, double ex, double ev,
                            const NormConfig& cfg) {
  const TorusGrid& g = *fhat.grid;
  double best = 0.0;
  for (const auto& mu : multi_indices(g.dim(), m)) {
    for (const auto& nu : multi_indices(g.dim(), n)) {
      SpectralField der = fhat;
      apply_multiplier(der, deriv_multiplier(g, mu, nu));
      best = std::fmax(best, holder_seminorm(der, ex, ev, cfg));
    }
  }
  return best;
}

}  // namespace

double x_norm(const std::vector<Sample>& traj, const Params& p, const NormConfig& cfg) {
  const double kp = p.kappa(), ga = p.gamma, al = p.alpha;
  const double ex = ga / (1.0 + al);
  double best = 0.0;
  for (const auto& s : traj) {
    if (!(s.t > 0.0)) continue;  // t = 0 terms carry zero weight (kappa > 0)
    double term = std::pow(s.t, kp) * sup_norm(to_physical(*s.spec));
    for (int m = 0; m <= cfg.max_deriv; ++m)
      for (int n = 0; m + n <= cfg.max_deriv; ++n) {
        const double w = std::pow(s.t, kp + m + (m + n + ga) / al);
        term += w * holder_of_derivative(*s.spec, m, n, ex, ga, cfg);
      }
    best = std::fmax(best, term);
  }
  return best;
}

double force_norm(const std::vector<double>& times,
                  const std::vector<std::vector<const SpectralField*>>& comps, const Params& p,
                  const NormConfig& cfg) {
  if (times.size() != comps.size()) throw std::invalid_argument("force_norm: times/comps mismatch");
  const double kp = p.kappa(), g0 = p.gamma0(), al = p.alpha;
  const double ex = g0 / (1.0 + al);
  double best = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    if (!(t > 0.0)) continue;
    double term = 0.0;
    for (int m = 0; m <= cfg.max_deriv; ++m)
      for (int n = 0; m + n <= cfg.max_deriv; ++n) {
        const double w = std::pow(t, kp + 1.0 + (m * (1.0 + al) + n - 1.0 + g0) / al);
        double h = 0.0;
        for (const SpectralField* Fc : comps[k])
          h = std::fmax(h, holder_of_derivative(*Fc, m, n, ex, g0, cfg));
        term += w * h;
      }
    best = std::fmax(best, term);
  }
  return best;
}

double seed_norm(const SpectralField& f0hat, const Params& p, const NormConfig& cfg) {
  const TorusGrid& g = *f0hat.grid;
  const std::vector<double> P = p_symbol(g, p);
  const double e = p.seed_exponent();  // 1 + (beta-2)/alpha, verbatim weight
  std::vector<double> mult(P.size());
  double best = 0.0;
  for (double t : cfg.sup_times) {
    for (std::size_t i = 0; i < P.size(); ++i) mult[i] = std::exp(-t * P[i]);
    SpectralField w = f0hat;
    apply_multiplier(w, mult);
    best = std::fmax(best, std::pow(t, e) * sup_norm(to_physical(w)));
  }
  return best;
}

}  // namespace fkfp::norms
