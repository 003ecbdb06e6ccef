// AVX2 lane. Mirrors the scalar reference op for op (no fma, same rounding
// sequence, canonical 4-lane reductions) so results are bitwise identical.

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>

#include "fkfp/simd/kernels.hpp"

namespace fkfp::simd {
namespace {

inline __m256d dup_pairs(const double* m) {
  // (m0, m0, m1, m1)
  __m128d lo = _mm_loadu_pd(m);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(lo), 0x50);
}

inline double hsum(__m256d acc) {
  __m128d lo = _mm256_castpd256_pd128(acc);   // (l0, l1)
  __m128d hi = _mm256_extractf128_pd(acc, 1); // (l2, l3)
  __m128d s2 = _mm_add_pd(lo, hi);            // (l0+l2, l1+l3)
  return _mm_cvtsd_f64(s2) + _mm_cvtsd_f64(_mm_unpackhi_pd(s2, s2));
}

inline double hmax(__m256d acc) {
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d m2 = _mm_max_pd(lo, hi);            // (max(l0,l2), max(l1,l3))
  double a = _mm_cvtsd_f64(m2);
  double b = _mm_cvtsd_f64(_mm_unpackhi_pd(m2, m2));
  return std::fmax(a, b);
}

// built inside the kernels (not at static init) so loading this TU on a
// non-AVX2 CPU executes no AVX instruction before the dispatcher checks
inline __m256d abs_mask() {
  return _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
}

void a_vd_mul(double* y, const double* a, const double* b, std::size_t n) {
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

void a_vd_axpy(double* y, const double* x, double a, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4)
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i),
                                          _mm256_mul_pd(av, _mm256_loadu_pd(x + i))));
  for (; i < n; ++i) y[i] += a * x[i];
}

void a_vd_scale(double* y, const double* x, double a, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = a * x[i];
}

void a_vz_scale_real(cplx* y, const cplx* x, const double* m, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2)
    _mm256_storeu_pd(ys + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(xs + 2 * i), dup_pairs(m + i)));
  for (; i < n; ++i) {
    ys[2 * i] = xs[2 * i] * m[i];
    ys[2 * i + 1] = xs[2 * i + 1] * m[i];
  }
}

void a_vz_scale_imag(cplx* y, const cplx* x, const double* m, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  const __m256d sign = _mm256_setr_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    __m256d xsw = _mm256_permute_pd(xv, 0b0101);           // (xi, xr, ...)
    __m256d ms = _mm256_xor_pd(dup_pairs(m + i), sign);    // (-m, m, ...)
    _mm256_storeu_pd(ys + 2 * i, _mm256_mul_pd(xsw, ms));
  }
  for (; i < n; ++i) {
    const double re = xs[2 * i], im = xs[2 * i + 1];
    ys[2 * i] = im * (-m[i]);
    ys[2 * i + 1] = re * m[i];
  }
}

inline __m256d cmul(__m256d x, __m256d p) {
  __m256d xr = _mm256_movedup_pd(x);            // (xr, xr, ...)
  __m256d xi = _mm256_permute_pd(x, 0b1111);    // (xi, xi, ...)
  __m256d ps = _mm256_permute_pd(p, 0b0101);    // (pi, pr, ...)
  return _mm256_addsub_pd(_mm256_mul_pd(xr, p), _mm256_mul_pd(xi, ps));
}

void a_vz_mul(cplx* y, const cplx* x, const cplx* p, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  const double* ps = reinterpret_cast<const double*>(p);
  double* ys = reinterpret_cast<double*>(y);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2)
    _mm256_storeu_pd(ys + 2 * i, cmul(_mm256_loadu_pd(xs + 2 * i), _mm256_loadu_pd(ps + 2 * i)));
  for (; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    const double pr = ps[2 * i], pi = ps[2 * i + 1];
    ys[2 * i] = xr * pr - xi * pi;
    ys[2 * i + 1] = xr * pi + xi * pr;
  }
}

void a_vz_scale(cplx* y, const cplx* x, cplx w, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  const double wr = w.real(), wi = w.imag();
  const __m256d wv = _mm256_setr_pd(wr, wi, wr, wi);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2)
    _mm256_storeu_pd(ys + 2 * i, cmul(_mm256_loadu_pd(xs + 2 * i), wv));
  for (; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    ys[2 * i] = xr * wr - xi * wi;
    ys[2 * i + 1] = xr * wi + xi * wr;
  }
}

void a_vz_axpy_real(cplx* y, const cplx* x, double a, std::size_t n) {
  a_vd_axpy(reinterpret_cast<double*>(y), reinterpret_cast<const double*>(x), a, 2 * n);
}

inline __m256d cmul_wb(__m256d b, __m256d wv, __m256d wsw) {
  // w*b with broadcast twiddle: (br*wr - bi*wi, br*wi + bi*wr)
  __m256d br = _mm256_movedup_pd(b);
  __m256d bi = _mm256_permute_pd(b, 0b1111);
  return _mm256_addsub_pd(_mm256_mul_pd(br, wv), _mm256_mul_pd(bi, wsw));
}

void a_bf_span(cplx* a, cplx* b, cplx w, std::size_t n) {
  double* as = reinterpret_cast<double*>(a);
  double* bs = reinterpret_cast<double*>(b);
  const double wr = w.real(), wi = w.imag();
  const __m256d wv = _mm256_setr_pd(wr, wi, wr, wi);
  const __m256d wsw = _mm256_setr_pd(wi, wr, wi, wr);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2) {
    __m256d bv = _mm256_loadu_pd(bs + 2 * i);
    __m256d t = cmul_wb(bv, wv, wsw);
    __m256d av = _mm256_loadu_pd(as + 2 * i);
    _mm256_storeu_pd(as + 2 * i, _mm256_add_pd(av, t));
    _mm256_storeu_pd(bs + 2 * i, _mm256_sub_pd(av, t));
  }
  for (; i < n; ++i) {
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

void a_bf_tw(cplx* a, cplx* b, const cplx* w, std::size_t n) {
  double* as = reinterpret_cast<double*>(a);
  double* bs = reinterpret_cast<double*>(b);
  const double* ws = reinterpret_cast<const double*>(w);
  std::size_t n2 = n - n % 2, i = 0;
  for (; i < n2; i += 2) {
    __m256d wv = _mm256_loadu_pd(ws + 2 * i);
    __m256d wsw = _mm256_permute_pd(wv, 0b0101);
    __m256d bv = _mm256_loadu_pd(bs + 2 * i);
    __m256d t = cmul_wb(bv, wv, wsw);
    __m256d av = _mm256_loadu_pd(as + 2 * i);
    _mm256_storeu_pd(as + 2 * i, _mm256_add_pd(av, t));
    _mm256_storeu_pd(bs + 2 * i, _mm256_sub_pd(av, t));
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

double a_rd_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double a_rd_abs_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4)
    acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), abs_mask()));
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double a_rd_wabs_sum(const double* w, const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i),
                                           _mm256_and_pd(_mm256_loadu_pd(x + i), abs_mask())));
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * std::fabs(x[i]);
  return s;
}

double a_rd_max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4)
    acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), abs_mask()));
  double s = hmax(acc);
  for (; i < n; ++i) s = std::fmax(s, std::fabs(x[i]));
  return s;
}

double a_rd_sum_sq(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t n4 = n - n % 4, i = 0;
  for (; i < n4; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double a_rd_sum_sq_z(const cplx* x, std::size_t n) {
  return a_rd_sum_sq(reinterpret_cast<const double*>(x), 2 * n);
}

}  // namespace

extern const Backend avx2_backend;
const Backend avx2_backend = {
    "avx2",       a_vd_mul,       a_vd_axpy, a_vd_scale,   a_vz_scale_real,
    a_vz_scale_imag, a_vz_mul,    a_vz_scale, a_vz_axpy_real,
    a_bf_span,    a_bf_tw,        a_rd_sum,  a_rd_abs_sum, a_rd_wabs_sum,
    a_rd_max_abs, a_rd_sum_sq,    a_rd_sum_sq_z,
};

}  // namespace fkfp::simd

#endif  // x86
