// NEON lane (aarch64). Emulates the canonical 4-lane reduction scheme with
// two float64x2 accumulators and mirrors the scalar rounding sequence, so
// results stay bitwise identical to the scalar and AVX2 lanes.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

#include "fkfp/simd/kernels.hpp"

namespace fkfp::simd {
namespace {

void n_vd_mul(double* y, const double* a, const double* b, std::size_t n) {
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2) vst1q_f64(y + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

void n_vd_axpy(double* y, const double* x, double a, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2)
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(av, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] += a * x[i];
}

void n_vd_scale(double* y, const double* x, double a, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2) vst1q_f64(y + i, vmulq_f64(av, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = a * x[i];
}

void n_vz_scale_real(cplx* y, const cplx* x, const double* m, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2) {
    float64x2x2_t v = vld2q_f64(xs + 2 * i);  // v.val[0]=(re0,re1) v.val[1]=(im0,im1)
    float64x2_t mv = vld1q_f64(m + i);
    v.val[0] = vmulq_f64(v.val[0], mv);
    v.val[1] = vmulq_f64(v.val[1], mv);
    vst2q_f64(ys + 2 * i, v);
  }
  for (; i < n; ++i) {
    ys[2 * i] = xs[2 * i] * m[i];
    ys[2 * i + 1] = xs[2 * i + 1] * m[i];
  }
}

void n_vz_scale_imag(cplx* y, const cplx* x, const double* m, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2) {
    float64x2x2_t v = vld2q_f64(xs + 2 * i);
    float64x2_t mv = vld1q_f64(m + i);
    float64x2x2_t o;
    o.val[0] = vmulq_f64(v.val[1], vnegq_f64(mv));
    o.val[1] = vmulq_f64(v.val[0], mv);
    vst2q_f64(ys + 2 * i, o);
  }
  for (; i < n; ++i) {
    const double re = xs[2 * i], im = xs[2 * i + 1];
    ys[2 * i] = im * (-m[i]);
    ys[2 * i + 1] = re * m[i];
  }
}

void n_vz_mul(cplx* y, const cplx* x, const cplx* p, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  const double* ps = reinterpret_cast<const double*>(p);
  double* ys = reinterpret_cast<double*>(y);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2) {
    float64x2x2_t a = vld2q_f64(xs + 2 * i);
    float64x2x2_t b = vld2q_f64(ps + 2 * i);
    float64x2x2_t o;
    o.val[0] = vsubq_f64(vmulq_f64(a.val[0], b.val[0]), vmulq_f64(a.val[1], b.val[1]));
    o.val[1] = vaddq_f64(vmulq_f64(a.val[0], b.val[1]), vmulq_f64(a.val[1], b.val[0]));
    vst2q_f64(ys + 2 * i, o);
  }
  for (; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    const double pr = ps[2 * i], pi = ps[2 * i + 1];
    ys[2 * i] = xr * pr - xi * pi;
    ys[2 * i + 1] = xr * pi + xi * pr;
  }
}

void n_vz_scale(cplx* y, const cplx* x, cplx w, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  const float64x2_t wr = vdupq_n_f64(w.real()), wi = vdupq_n_f64(w.imag());
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2) {
    float64x2x2_t a = vld2q_f64(xs + 2 * i);
    float64x2x2_t o;
    o.val[0] = vsubq_f64(vmulq_f64(a.val[0], wr), vmulq_f64(a.val[1], wi));
    o.val[1] = vaddq_f64(vmulq_f64(a.val[0], wi), vmulq_f64(a.val[1], wr));
    vst2q_f64(ys + 2 * i, o);
  }
  for (; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    ys[2 * i] = xr * w.real() - xi * w.imag();
    ys[2 * i + 1] = xr * w.imag() + xi * w.real();
  }
}

void n_vz_axpy_real(cplx* y, const cplx* x, double a, std::size_t n) {
  n_vd_axpy(reinterpret_cast<double*>(y), reinterpret_cast<const double*>(x), a, 2 * n);
}

void n_bf_span(cplx* a, cplx* b, cplx w, std::size_t n) {
  double* as = reinterpret_cast<double*>(a);
  double* bs = reinterpret_cast<double*>(b);
  const float64x2_t wr = vdupq_n_f64(w.real()), wi = vdupq_n_f64(w.imag());
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2) {
    float64x2x2_t bv = vld2q_f64(bs + 2 * i);
    float64x2_t tr = vsubq_f64(vmulq_f64(bv.val[0], wr), vmulq_f64(bv.val[1], wi));
    float64x2_t ti = vaddq_f64(vmulq_f64(bv.val[0], wi), vmulq_f64(bv.val[1], wr));
    float64x2x2_t av = vld2q_f64(as + 2 * i);
    float64x2x2_t ao, bo;
    ao.val[0] = vaddq_f64(av.val[0], tr);
    ao.val[1] = vaddq_f64(av.val[1], ti);
    bo.val[0] = vsubq_f64(av.val[0], tr);
    bo.val[1] = vsubq_f64(av.val[1], ti);
    vst2q_f64(as + 2 * i, ao);
    vst2q_f64(bs + 2 * i, bo);
  }
  for (; i < n; ++i) {
    const double br = bs[2 * i], bi = bs[2 * i + 1];
    const double tr = br * w.real() - bi * w.imag();
    const double ti = br * w.imag() + bi * w.real();
    const double ar = as[2 * i], ai = as[2 * i + 1];
    as[2 * i] = ar + tr;
    as[2 * i + 1] = ai + ti;
    bs[2 * i] = ar - tr;
    bs[2 * i + 1] = ai - ti;
  }
}

void n_bf_tw(cplx* a, cplx* b, const cplx* w, std::size_t n) {
  double* as = reinterpret_cast<double*>(a);
  double* bs = reinterpret_cast<double*>(b);
  const double* ws = reinterpret_cast<const double*>(w);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2) {
    float64x2x2_t wv = vld2q_f64(ws + 2 * i);
    float64x2x2_t bv = vld2q_f64(bs + 2 * i);
    float64x2_t tr = vsubq_f64(vmulq_f64(bv.val[0], wv.val[0]), vmulq_f64(bv.val[1], wv.val[1]));
    float64x2_t ti = vaddq_f64(vmulq_f64(bv.val[0], wv.val[1]), vmulq_f64(bv.val[1], wv.val[0]));
    float64x2x2_t av = vld2q_f64(as + 2 * i);
    float64x2x2_t ao, bo;
    ao.val[0] = vaddq_f64(av.val[0], tr);
    ao.val[1] = vaddq_f64(av.val[1], ti);
    bo.val[0] = vsubq_f64(av.val[0], tr);
    bo.val[1] = vsubq_f64(av.val[1], ti);
    vst2q_f64(as + 2 * i, ao);
    vst2q_f64(bs + 2 * i, bo);
  }
  for (; i < n; ++i) {
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

// Virtual lanes (l0,l1) in A and (l2,l3) in B; combine (l0+l2)+(l1+l3).
double n_rd_sum(const double* x, std::size_t n) {
  float64x2_t A = vdupq_n_f64(0.0), B = vdupq_n_f64(0.0);
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4) {
    A = vaddq_f64(A, vld1q_f64(x + i));
    B = vaddq_f64(B, vld1q_f64(x + i + 2));
  }
  float64x2_t C = vaddq_f64(A, B);
  double s = vgetq_lane_f64(C, 0) + vgetq_lane_f64(C, 1);
  for (; i < n; ++i) s += x[i];
  return s;
}

double n_rd_abs_sum(const double* x, std::size_t n) {
  float64x2_t A = vdupq_n_f64(0.0), B = vdupq_n_f64(0.0);
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4) {
    A = vaddq_f64(A, vabsq_f64(vld1q_f64(x + i)));
    B = vaddq_f64(B, vabsq_f64(vld1q_f64(x + i + 2)));
  }
  float64x2_t C = vaddq_f64(A, B);
  double s = vgetq_lane_f64(C, 0) + vgetq_lane_f64(C, 1);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double n_rd_wabs_sum(const double* w, const double* x, std::size_t n) {
  float64x2_t A = vdupq_n_f64(0.0), B = vdupq_n_f64(0.0);
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4) {
    A = vaddq_f64(A, vmulq_f64(vld1q_f64(w + i), vabsq_f64(vld1q_f64(x + i))));
    B = vaddq_f64(B, vmulq_f64(vld1q_f64(w + i + 2), vabsq_f64(vld1q_f64(x + i + 2))));
  }
  float64x2_t C = vaddq_f64(A, B);
  double s = vgetq_lane_f64(C, 0) + vgetq_lane_f64(C, 1);
  for (; i < n; ++i) s += w[i] * std::fabs(x[i]);
  return s;
}

double n_rd_max_abs(const double* x, std::size_t n) {
  float64x2_t A = vdupq_n_f64(0.0), B = vdupq_n_f64(0.0);
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4) {
    A = vmaxq_f64(A, vabsq_f64(vld1q_f64(x + i)));
    B = vmaxq_f64(B, vabsq_f64(vld1q_f64(x + i + 2)));
  }
  float64x2_t C = vmaxq_f64(A, B);
  double s = std::fmax(vgetq_lane_f64(C, 0), vgetq_lane_f64(C, 1));
  for (; i < n; ++i) s = std::fmax(s, std::fabs(x[i]));
  return s;
}

double n_rd_sum_sq(const double* x, std::size_t n) {
  float64x2_t A = vdupq_n_f64(0.0), B = vdupq_n_f64(0.0);
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4) {
    float64x2_t a = vld1q_f64(x + i), b = vld1q_f64(x + i + 2);
    A = vaddq_f64(A, vmulq_f64(a, a));
    B = vaddq_f64(B, vmulq_f64(b, b));
  }
  float64x2_t C = vaddq_f64(A, B);
  double s = vgetq_lane_f64(C, 0) + vgetq_lane_f64(C, 1);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double n_rd_sum_sq_z(const cplx* x, std::size_t n) {
  return n_rd_sum_sq(reinterpret_cast<const double*>(x), 2 * n);
}

}  // namespace

extern const Backend neon_backend;
const Backend neon_backend = {
    "neon",       n_vd_mul,       n_vd_axpy, n_vd_scale,   n_vz_scale_real,
    n_vz_scale_imag, n_vz_mul,    n_vz_scale, n_vz_axpy_real,
    n_bf_span,    n_bf_tw,        n_rd_sum,  n_rd_abs_sum, n_rd_wabs_sum,
    n_rd_max_abs, n_rd_sum_sq,    n_rd_sum_sq_z,
};

}  // namespace fkfp::simd

#endif  // aarch64
