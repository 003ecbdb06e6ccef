#include "fkfp/core/symbols.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include <map>
#include <mutex>

#include "fkfp/core/threading.hpp"
#include "fkfp/simd/kernels.hpp"

namespace fkfp {

namespace {

// 15-point Gauss-Legendre on [-1, 1]
const double kGlX[15] = {
    0.0,
    -0.2011940939974345, 0.2011940939974345,
    -0.3941513470775634, 0.3941513470775634,
    -0.5709721726085388, 0.5709721726085388,
    -0.7244177313601701, 0.7244177313601701,
    -0.8482065834104272, 0.8482065834104272,
    -0.9372733924007060, 0.9372733924007060,
    -0.9879925180204854, 0.9879925180204854};
const double kGlW[15] = {
    0.2025782419255613,
    0.1984314853271116, 0.1984314853271116,
    0.1861610000155622, 0.1861610000155622,
    0.1662692058169939, 0.1662692058169939,
    0.1395706779261543, 0.1395706779261543,
    0.1071592204671719, 0.1071592204671719,
    0.0703660474881081, 0.0703660474881081,
    0.0307532419961173, 0.0307532419961173};

struct PsiIntegrand {
  const double* xi;
  const double* eta;
  int d;
  double alpha;

  double operator()(double s) const {
    double q = 0.0;
    for (int c = 0; c < d; ++c) {
      const double u = eta[c] - s * xi[c];
      q += u * u;
    }
    return std::pow(q, 0.5 * alpha);
  }
};

double gl15(const PsiIntegrand& f, double a, double b) {
  const double mid = 0.5 * (a + b), hl = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 15; ++i) s += kGlW[i] * f(mid + hl * kGlX[i]);
  return s * hl;
}

// uniform absolute per-panel budget: the |u|^alpha kink at a panel endpoint is
// scale-invariant in relative error, so a panel-relative test would never
// terminate there; an absolute budget shrinks the kink panel's contribution
// geometrically and stops after O(log 1/tol) levels
double adapt(const PsiIntegrand& f, double a, double b, double whole, double tol_abs, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl15(f, a, mid), right = gl15(f, mid, b);
  const double sum = left + right;
  if (depth <= 0 || std::fabs(sum - whole) <= tol_abs) return sum;
  return adapt(f, a, mid, left, tol_abs, depth - 1) + adapt(f, mid, b, right, tol_abs, depth - 1);
}

double integrate(const PsiIntegrand& f, double a, double b, double scale, double reltol) {
  if (!(b > a)) return 0.0;
  const double tol_abs = 0.125 * reltol * std::fmax(scale, 1e-280);
  return adapt(f, a, b, gl15(f, a, b), tol_abs, 40);
}

inline double ipow_small(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

double psi_closed_d1(double t, double xi, double eta, double alpha) {
  if (xi == 0.0) return t * std::pow(std::fabs(eta), alpha);
  auto B = [alpha](double u) { return u * std::pow(std::fabs(u), alpha); };
  return (B(eta) - B(eta - t * xi)) / ((alpha + 1.0) * xi);
}

double psi_closed_alpha2(double t, const double* xi, const double* eta, int d) {
  double x2 = 0.0, xe = 0.0, e2 = 0.0;
  for (int c = 0; c < d; ++c) {
    x2 += xi[c] * xi[c];
    xe += xi[c] * eta[c];
    e2 += eta[c] * eta[c];
  }
  return t * e2 - t * t * xe + t * t * t * x2 / 3.0;
}

double psi_quadrature(double t, const double* xi, const double* eta, int d, double alpha,
                      double reltol) {
  if (!(t > 0.0)) return 0.0;
  PsiIntegrand f{xi, eta, d, alpha};
  double x2 = 0.0, xe = 0.0;
  for (int c = 0; c < d; ++c) {
    x2 += xi[c] * xi[c];
    xe += xi[c] * eta[c];
  }
  if (x2 == 0.0) {
    const double scale = gl15(f, 0.0, t);
    return integrate(f, 0.0, t, scale, reltol);
  }
  double split = xe / x2;
  if (split < 0.0) split = 0.0;
  if (split > t) split = t;
  const double scale = gl15(f, 0.0, split) + gl15(f, split, t);
  return integrate(f, 0.0, split, scale, reltol) + integrate(f, split, t, scale, reltol);
}

double psi_eval(double t, const double* xi, const double* eta, const Params& p) {
  if (!(t > 0.0)) return 0.0;
  if (p.alpha == 2.0) return psi_closed_alpha2(t, xi, eta, p.d);
  double x2 = 0.0, e2 = 0.0;
  for (int c = 0; c < p.d; ++c) {
    x2 += xi[c] * xi[c];
    e2 += eta[c] * eta[c];
  }
  if (x2 == 0.0) return t * std::pow(e2, 0.5 * p.alpha);
  if (p.d == 1) return psi_closed_d1(t, xi[0], eta[0], p.alpha);
  return psi_quadrature(t, xi, eta, p.d, p.alpha);
}

std::vector<double> build_real_symbol(
    const TorusGrid& g,
    const std::function<double(const int*, const double*, const double*)>& fn) {
  std::vector<double> m(g.size());
  const int d = g.dim(), na = g.n_axes();
  const std::size_t slice = g.size() / static_cast<std::size_t>(g.len(0));
  parallel_for(static_cast<std::size_t>(g.len(0)), [&](std::size_t i0) {
    int idx[4] = {static_cast<int>(i0), 0, 0, 0};
    double xi[2] = {0, 0}, eta[2] = {0, 0};
    if (d >= 1) xi[0] = g.freq_table(0)[i0];
    for (std::size_t off = 0; off < slice; ++off) {
      const std::size_t flat = i0 * slice + off;
      std::size_t r = off;
      for (int a = 1; a < na; ++a) {
        const std::size_t i = r / g.stride(a);
        r %= g.stride(a);
        idx[a] = static_cast<int>(i);
        if (a < d)
          xi[a] = g.freq_table(a)[i];
        else
          eta[a - d] = g.freq_table(a)[i];
      }
      m[flat] = fn(idx, xi, eta);
    }
  });
  return m;
}

std::vector<double> propagator_symbol(double t, const TorusGrid& g, const Params& p) {
  if (g.dim() != p.d) throw std::invalid_argument("propagator_symbol: grid/params dimension mismatch");
  return build_real_symbol(g, [&](const int*, const double* xi, const double* eta) {
    return std::exp(-psi_eval(t, xi, eta, p));
  });
}

std::vector<double> p_symbol(const TorusGrid& g, const Params& p) {
  const double q = 1.0 / (1.0 + p.alpha);
  return build_real_symbol(g, [&](const int*, const double* xi, const double* eta) {
    double x2 = 0.0, e2 = 0.0;
    for (int c = 0; c < g.dim(); ++c) {
      x2 += xi[c] * xi[c];
      e2 += eta[c] * eta[c];
    }
    const double base = (x2 == 0.0 ? 0.0 : std::pow(x2, q)) + e2;
    return base == 0.0 ? 0.0 : std::pow(base, 0.5 * p.alpha);
  });
}

namespace {
// per-(grid,beta,component) cache: these symbols are rebuilt in every
// nonlinearity evaluation, which dominates the stepping loops otherwise
struct FracKey {
  const TorusGrid* g;
  double beta;
  int comp;
  bool operator<(const FracKey& o) const {
    return std::tie(g, beta, comp) < std::tie(o.g, o.beta, o.comp);
  }
};
std::mutex g_frac_mu;
std::map<FracKey, std::shared_ptr<const std::vector<double>>> g_frac_cache;
}  // namespace

std::vector<double> frac_grad_inv_symbol(const TorusGrid& g, const Params& p, int component) {
  if (component < 0 || component >= g.dim())
    throw std::invalid_argument("frac_grad_inv_symbol: bad component");
  const int d = g.dim();
  {
    std::lock_guard<std::mutex> lk(g_frac_mu);
    auto it = g_frac_cache.find({&g, p.beta, component});
    if (it != g_frac_cache.end()) return *it->second;
  }
  auto sym = build_real_symbol(g, [&](const int* idx, const double*, const double* eta) {
    for (int a = d; a < 2 * d; ++a)
      if (g.nyquist(a, idx[a])) return 0.0;
    double e2 = 0.0;
    for (int c = 0; c < d; ++c) e2 += eta[c] * eta[c];
    if (e2 == 0.0) return 0.0;
    return eta[component] * std::pow(e2, -0.5 * p.beta);
  });
  std::lock_guard<std::mutex> lk(g_frac_mu);
  if (g_frac_cache.size() > 64) g_frac_cache.clear();
  g_frac_cache[{&g, p.beta, component}] = std::make_shared<const std::vector<double>>(sym);
  return sym;
}

std::vector<cplx> kernel_multiplier(double t, const Decoration& dec, const TorusGrid& g,
                                    const Params& p) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel_multiplier: t must be positive (t = 0 is a delta)");
  if (dec.j1 < 0 || dec.j2 < 0 || dec.g1 < 0.0 || dec.g1 >= 1.0 || dec.g2 < 0.0 || dec.g2 >= 1.0)
    throw std::invalid_argument("kernel_multiplier: decoration out of range");
  const bool odd = ((dec.j1 + dec.j2) & 1) != 0;
  const int na = g.n_axes(), d = g.dim();
  // i^{j1+j2}
  static const cplx kI[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  const cplx ip = kI[(dec.j1 + dec.j2) & 3];

  std::vector<cplx> m(g.size());
  const std::size_t slice = g.size() / static_cast<std::size_t>(g.len(0));
  parallel_for(static_cast<std::size_t>(g.len(0)), [&](std::size_t i0) {
    int idx[4] = {static_cast<int>(i0), 0, 0, 0};
    double xi[2] = {0, 0}, eta[2] = {0, 0};
    xi[0] = g.freq_table(0)[i0];
    for (std::size_t off = 0; off < slice; ++off) {
      const std::size_t flat = i0 * slice + off;
      std::size_t r = off;
      for (int a = 1; a < na; ++a) {
        const std::size_t i = r / g.stride(a);
        r %= g.stride(a);
        idx[a] = static_cast<int>(i);
        if (a < d)
          xi[a] = g.freq_table(a)[i];
        else
          eta[a - d] = g.freq_table(a)[i];
      }
      if (odd) {
        bool ny = false;
        for (int a = 0; a < na; ++a) ny = ny || g.nyquist(a, idx[a]);
        if (ny) {
          m[flat] = cplx{};
          continue;
        }
      }
      double x2 = 0.0, e2 = 0.0;
      for (int c = 0; c < d; ++c) {
        x2 += xi[c] * xi[c];
        e2 += eta[c] * eta[c];
      }
      double mag = std::exp(-psi_eval(t, xi, eta, p));
      mag *= ipow_small(xi[0], dec.j1) * ipow_small(eta[0], dec.j2);
      if (dec.g1 > 0.0) mag *= x2 == 0.0 ? 0.0 : std::pow(x2, 0.5 * dec.g1);
      if (dec.g2 > 0.0) mag *= e2 == 0.0 ? 0.0 : std::pow(e2, 0.5 * dec.g2);
      // spectral slot k holds the coefficient for samples at -L/2 + j*dx, so a
      // directly built spectrum needs the (-1)^k twist to center the kernel at
      // coordinate 0 (multiplier application is twist-free; this is the one
      // place a spectrum is constructed rather than transformed)
      int par = 0;
      for (int a = 0; a < na; ++a) par ^= idx[a] & 1;
      m[flat] = (par ? -1.0 : 1.0) * (ip * mag);
    }
  });
  return m;
}

std::vector<cplx> deriv_multiplier(const TorusGrid& g, const std::vector<int>& mu,
                                   const std::vector<int>& nu) {
  const int d = g.dim();
  if (static_cast<int>(mu.size()) != d || static_cast<int>(nu.size()) != d)
    throw std::invalid_argument("deriv_multiplier: multi-index size mismatch");
  int total = 0;
  for (int c = 0; c < d; ++c) total += mu[c] + nu[c];
  const bool odd = (total & 1) != 0;
  static const cplx kI[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  const cplx ip = kI[total & 3];

  std::vector<cplx> m(g.size());
  for_each_mode(g, [&](std::size_t flat, const int* idx, const double* xi, const double* eta) {
    if (odd) {
      for (int a = 0; a < 2 * d; ++a)
        if (g.nyquist(a, idx[a])) {
          m[flat] = cplx{};
          return;
        }
    }
    double mag = 1.0;
    for (int c = 0; c < d; ++c) mag *= ipow_small(xi[c], mu[c]) * ipow_small(eta[c], nu[c]);
    m[flat] = ip * mag;
  });
  return m;
}

void apply_multiplier(SpectralField& f, const std::vector<double>& m) {
  if (m.size() != f.c.size()) throw std::invalid_argument("apply_multiplier: size mismatch");
  simd::backend().vz_scale_real(f.c.data(), f.c.data(), m.data(), f.c.size());
}

void apply_multiplier(SpectralField& f, const std::vector<cplx>& m) {
  if (m.size() != f.c.size()) throw std::invalid_argument("apply_multiplier: size mismatch");
  simd::backend().vz_mul(f.c.data(), f.c.data(), m.data(), f.c.size());
}

void apply_imag_multiplier(SpectralField& f, const std::vector<double>& m) {
  if (m.size() != f.c.size()) throw std::invalid_argument("apply_imag_multiplier: size mismatch");
  simd::backend().vz_scale_imag(f.c.data(), f.c.data(), m.data(), f.c.size());
}

namespace {
std::mutex g_mask_mu;
std::map<const TorusGrid*, std::shared_ptr<const std::vector<unsigned char>>> g_mask_cache;

std::shared_ptr<const std::vector<unsigned char>> dealias_mask(const TorusGrid& g) {
  {
    std::lock_guard<std::mutex> lk(g_mask_mu);
    auto it = g_mask_cache.find(&g);
    if (it != g_mask_cache.end()) return it->second;
  }
  auto mask = std::make_shared<std::vector<unsigned char>>(g.size(), 0);
  for_each_mode(g, [&](std::size_t flat, const int* idx, const double*, const double*) {
    for (int a = 0; a < g.n_axes(); ++a) {
      const int cut = g.len(a) / 3;
      const int m = g.fidx(a, idx[a]);
      if (m > cut || m < -cut) {
        (*mask)[flat] = 1;
        return;
      }
    }
  });
  std::lock_guard<std::mutex> lk(g_mask_mu);
  if (g_mask_cache.size() > 64) g_mask_cache.clear();
  g_mask_cache[&g] = mask;
  return mask;
}
}  // namespace

void dealias_23(SpectralField& f) {
  const auto mask = dealias_mask(*f.grid);
  const unsigned char* m = mask->data();
  for (std::size_t i = 0; i < f.c.size(); ++i)
    if (m[i]) f.c[i] = cplx{};
}

}  // namespace fkfp
