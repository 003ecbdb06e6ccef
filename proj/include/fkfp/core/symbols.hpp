#pragma once

#include <functional>
#include <vector>

#include "fkfp/core/field.hpp"
#include "fkfp/core/grid.hpp"
#include "fkfp/core/params.hpp"

namespace fkfp {

// ---- phase integral psi(t,xi,eta) = int_0^t |eta - sigma*xi|^alpha dsigma --

// d = 1, xi != 0: ((eta)|eta|^a - (eta-t*xi)|eta-t*xi|^a) / ((a+1)*xi)
double psi_closed_d1(double t, double xi, double eta, double alpha);
// alpha = 2, any d: t|eta|^2 - t^2 xi.eta + t^3 |xi|^2 / 3
double psi_closed_alpha2(double t, const double* xi, const double* eta, int d);
// adaptive Gauss-Legendre along sigma, split at the integrand minimizer
// sigma* = (xi.eta)/|xi|^2 clamped to [0,t] (derivative kink there)
double psi_quadrature(double t, const double* xi, const double* eta, int d, double alpha,
                      double reltol = 1e-13);
// dispatcher: closed form when d = 1 or xi = 0 or alpha = 2, else quadrature
double psi_eval(double t, const double* xi, const double* eta, const Params& p);

// ---- multiplier arrays over the frequency lattice ---------------------------

// exp(-psi(t, xi, eta)); 1 at the origin, entries in (0, 1]
std::vector<double> propagator_symbol(double t, const TorusGrid& g, const Params& p);

// (|xi|^{2/(1+alpha)} + |eta|^2)^{alpha/2}; 0 at the origin
std::vector<double> p_symbol(const TorusGrid& g, const Params& p);

// component c of grad_v L_v^{-beta}: the multiplier is i*m with
// m = eta_c |eta|^{-beta}; m = 0 at eta = 0 (annihilates v-constants) and on
// v-Nyquist rows (odd symbol, keeps real fields real)
std::vector<double> frac_grad_inv_symbol(const TorusGrid& g, const Params& p, int component);

// kernel decoration (i xi_0)^{j1} (i eta_0)^{j2} |xi|^{g1} |eta|^{g2} e^{-psi}
struct Decoration {
  int j1 = 0, j2 = 0;
  double g1 = 0.0, g2 = 0.0;
};
std::vector<cplx> kernel_multiplier(double t, const Decoration& dec, const TorusGrid& g,
                                    const Params& p);

// derivative multiplier prod_c (i xi_c)^{mu_c} * prod_c (i eta_c)^{nu_c}
std::vector<cplx> deriv_multiplier(const TorusGrid& g, const std::vector<int>& mu,
                                   const std::vector<int>& nu);

// apply a multiplier in place
void apply_multiplier(SpectralField& f, const std::vector<double>& m);
void apply_multiplier(SpectralField& f, const std::vector<cplx>& m);
// f <- (i*m) .* f   (odd symbols stored as real arrays)
void apply_imag_multiplier(SpectralField& f, const std::vector<double>& m);

// 2/3-rule dealiasing: zero modes with |m| > N/3 on any axis
void dealias_23(SpectralField& f);

// generic lattice walk: fn(flat, idx[2d], xi[d], eta[d]); parallel over axis 0
template <class Fn>
void for_each_mode(const TorusGrid& g, Fn&& fn);

std::vector<double> build_real_symbol(const TorusGrid& g,
                                      const std::function<double(const int*, const double*, const double*)>& fn);

// ---- impl ------------------------------------------------------------------

template <class Fn>
void for_each_mode(const TorusGrid& g, Fn&& fn) {
  const int d = g.dim(), na = g.n_axes();
  const std::size_t n = g.size();
  for (std::size_t flat = 0; flat < n; ++flat) {
    int idx[4] = {0, 0, 0, 0};
    double xi[2] = {0, 0}, eta[2] = {0, 0};
    std::size_t r = flat;
    for (int a = 0; a < na; ++a) {
      const std::size_t i = r / g.stride(a);
      r %= g.stride(a);
      idx[a] = static_cast<int>(i);
      if (a < d)
        xi[a] = g.freq_table(a)[i];
      else
        eta[a - d] = g.freq_table(a)[i];
    }
    fn(flat, idx, xi, eta);
  }
}

}  // namespace fkfp
