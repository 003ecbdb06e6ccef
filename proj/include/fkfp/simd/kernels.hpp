#pragma once

#include <complex>
#include <cstddef>

// Hot array kernels with runtime-dispatched backends (scalar / AVX2 / NEON).
//
// Every backend implements the identical operation order, so results are
// bitwise equal no matter which backend the dispatcher picks:
//   * pointwise ops: one rounding per arithmetic op, no fma (the build also
//     sets -ffp-contract=off so the scalar lane cannot be contracted);
//   * reductions: a canonical 4-lane scheme. Lane j accumulates x[4i+j] over
//     the main loop, lanes combine as (l0+l2)+(l1+l3), and the tail (n%4)
//     folds into the result left to right.
// The equivalence is asserted bitwise in tests/test_simd.cpp.

namespace fkfp::simd {

using cplx = std::complex<double>;

struct Backend {
  const char* name;

  // real arrays
  void (*vd_mul)(double* y, const double* a, const double* b, std::size_t n);   // y[i] = a[i]*b[i]
  void (*vd_axpy)(double* y, const double* x, double a, std::size_t n);         // y[i] += a*x[i]
  void (*vd_scale)(double* y, const double* x, double a, std::size_t n);        // y[i] = a*x[i]

  // complex arrays (interleaved re,im)
  void (*vz_scale_real)(cplx* y, const cplx* x, const double* m, std::size_t n); // y = m.*x
  void (*vz_scale_imag)(cplx* y, const cplx* x, const double* m, std::size_t n); // y = (i*m).*x
  void (*vz_mul)(cplx* y, const cplx* x, const cplx* p, std::size_t n);          // y = p.*x
  void (*vz_scale)(cplx* y, const cplx* x, cplx w, std::size_t n);               // y = w*x
  void (*vz_axpy_real)(cplx* y, const cplx* x, double a, std::size_t n);         // y += a*x

  // FFT butterflies: (a,b) <- (a + w*b, a - w*b)
  void (*bf_span)(cplx* a, cplx* b, cplx w, std::size_t n);                      // broadcast twiddle
  void (*bf_tw)(cplx* a, cplx* b, const cplx* w, std::size_t n);                 // per-element twiddle

  // canonical-order reductions
  double (*rd_sum)(const double* x, std::size_t n);
  double (*rd_abs_sum)(const double* x, std::size_t n);
  double (*rd_wabs_sum)(const double* w, const double* x, std::size_t n);        // sum w[i]*|x[i]|
  double (*rd_max_abs)(const double* x, std::size_t n);
  double (*rd_sum_sq)(const double* x, std::size_t n);
  double (*rd_sum_sq_z)(const cplx* x, std::size_t n);                           // sum |z|^2
};

// Selected backend. Resolution order: explicit select_backend() call,
// FKFP_SIMD environment variable, best supported lane, scalar.
const Backend& backend();

// Force a backend by name ("scalar", "avx2", "neon"); returns false if the
// backend is unavailable on this machine.
bool select_backend(const char* name);

// nullptr if unavailable.
const Backend* backend_by_name(const char* name);

extern const Backend scalar_backend;

bool avx2_supported();
bool neon_supported();

}  // namespace fkfp::simd
