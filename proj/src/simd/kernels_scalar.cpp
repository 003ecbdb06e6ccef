#include "fkfp/simd/kernels.hpp"

#include <cmath>

// Scalar reference lane. The SIMD lanes mirror these expression trees
// operation for operation; see kernels.hpp for the contract.

namespace fkfp::simd {
namespace {

void s_vd_mul(double* y, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
}

void s_vd_axpy(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_vd_scale(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

void s_vz_scale_real(cplx* y, const cplx* x, const double* m, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    ys[2 * i] = xs[2 * i] * m[i];
    ys[2 * i + 1] = xs[2 * i + 1] * m[i];
  }
}

void s_vz_scale_imag(cplx* y, const cplx* x, const double* m, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = xs[2 * i], im = xs[2 * i + 1];
    ys[2 * i] = im * (-m[i]);
    ys[2 * i + 1] = re * m[i];
  }
}

void s_vz_mul(cplx* y, const cplx* x, const cplx* p, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  const double* ps = reinterpret_cast<const double*>(p);
  double* ys = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    const double pr = ps[2 * i], pi = ps[2 * i + 1];
    ys[2 * i] = xr * pr - xi * pi;
    ys[2 * i + 1] = xr * pi + xi * pr;
  }
}

void s_vz_scale(cplx* y, const cplx* x, cplx w, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  const double wr = w.real(), wi = w.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    ys[2 * i] = xr * wr - xi * wi;
    ys[2 * i + 1] = xr * wi + xi * wr;
  }
}

void s_vz_axpy_real(cplx* y, const cplx* x, double a, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < 2 * n; ++i) ys[i] += a * xs[i];
}

void s_bf_span(cplx* a, cplx* b, cplx w, std::size_t n) {
  double* as = reinterpret_cast<double*>(a);
  double* bs = reinterpret_cast<double*>(b);
  const double wr = w.real(), wi = w.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double br = bs[2 * i], bi = bs[2 * i + 1];
    const double tr = br * wr - bi * wi;
    const double ti = br * wi + bi * wr;
    const double ar = as[2 * i], ai = as[2 * i + 1];
    as[2 * i] = ar + tr;
    as[2 * i + 1] = ai + ti;
    bs[2 * i] = ar - tr;
    bs[2 * i + 1] = ai - ti;
  }
}

void s_bf_tw(cplx* a, cplx* b, const cplx* w, std::size_t n) {
  double* as = reinterpret_cast<double*>(a);
  double* bs = reinterpret_cast<double*>(b);
  const double* ws = reinterpret_cast<const double*>(w);
  for (std::size_t i = 0; i < n; ++i) {
    const double br = bs[2 * i], bi = bs[2 * i + 1];
    const double wr = ws[2 * i], wi = ws[2 * i + 1];
    const double tr = br * wr - bi * wi;
    const double ti = br * wi + bi * wr;
    const double ar = as[2 * i], ai = as[2 * i + 1];
    as[2 * i] = ar + tr;
    as[2 * i + 1] = ai + ti;
    bs[2 * i] = ar - tr;
    bs[2 * i + 1] = ai - ti;
  }
}

// ---- canonical 4-lane reductions -------------------------------------------

double s_rd_sum(const double* x, std::size_t n) {
  double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    l0 += x[i];
    l1 += x[i + 1];
    l2 += x[i + 2];
    l3 += x[i + 3];
  }
  double s = (l0 + l2) + (l1 + l3);
  for (std::size_t i = n4; i < n; ++i) s += x[i];
  return s;
}

double s_rd_abs_sum(const double* x, std::size_t n) {
  double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    l0 += std::fabs(x[i]);
    l1 += std::fabs(x[i + 1]);
    l2 += std::fabs(x[i + 2]);
    l3 += std::fabs(x[i + 3]);
  }
  double s = (l0 + l2) + (l1 + l3);
  for (std::size_t i = n4; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double s_rd_wabs_sum(const double* w, const double* x, std::size_t n) {
  double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    l0 += w[i] * std::fabs(x[i]);
    l1 += w[i + 1] * std::fabs(x[i + 1]);
    l2 += w[i + 2] * std::fabs(x[i + 2]);
    l3 += w[i + 3] * std::fabs(x[i + 3]);
  }
  double s = (l0 + l2) + (l1 + l3);
  for (std::size_t i = n4; i < n; ++i) s += w[i] * std::fabs(x[i]);
  return s;
}

double s_rd_max_abs(const double* x, std::size_t n) {
  double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    l0 = std::fmax(l0, std::fabs(x[i]));
    l1 = std::fmax(l1, std::fabs(x[i + 1]));
    l2 = std::fmax(l2, std::fabs(x[i + 2]));
    l3 = std::fmax(l3, std::fabs(x[i + 3]));
  }
  double s = std::fmax(std::fmax(l0, l2), std::fmax(l1, l3));
  for (std::size_t i = n4; i < n; ++i) s = std::fmax(s, std::fabs(x[i]));
  return s;
}

double s_rd_sum_sq(const double* x, std::size_t n) {
  double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    l0 += x[i] * x[i];
    l1 += x[i + 1] * x[i + 1];
    l2 += x[i + 2] * x[i + 2];
    l3 += x[i + 3] * x[i + 3];
  }
  double s = (l0 + l2) + (l1 + l3);
  for (std::size_t i = n4; i < n; ++i) s += x[i] * x[i];
  return s;
}

double s_rd_sum_sq_z(const cplx* x, std::size_t n) {
  // |z|^2 over the interleaved doubles is the real sum-of-squares.
  return s_rd_sum_sq(reinterpret_cast<const double*>(x), 2 * n);
}

}  // namespace

const Backend scalar_backend = {
    "scalar",     s_vd_mul,       s_vd_axpy, s_vd_scale,   s_vz_scale_real,
    s_vz_scale_imag, s_vz_mul,    s_vz_scale, s_vz_axpy_real,
    s_bf_span,    s_bf_tw,        s_rd_sum,  s_rd_abs_sum, s_rd_wabs_sum,
    s_rd_max_abs, s_rd_sum_sq,    s_rd_sum_sq_z,
};

}  // namespace fkfp::simd
