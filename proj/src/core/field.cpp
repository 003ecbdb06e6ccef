#include "fkfp/core/field.hpp"

#include <cmath>
#include <stdexcept>

#include "fkfp/core/fft.hpp"
#include "fkfp/simd/kernels.hpp"

namespace fkfp {

void check_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!a.same(b)) throw std::invalid_argument("field: grid mismatch");
}

SpectralField to_spectral(const PhaseField& f) {
  SpectralField s(f.grid);
  if (f.v.size() != f.grid->size()) throw std::invalid_argument("field: value/grid size mismatch");
  for (std::size_t i = 0; i < f.v.size(); ++i) s.c[i] = cplx(f.v[i], 0.0);
  fft_all_axes(s.c, *s.grid, false);
  const double scl = 1.0 / static_cast<double>(s.grid->size());
  simd::backend().vd_scale(reinterpret_cast<double*>(s.c.data()),
                           reinterpret_cast<const double*>(s.c.data()), scl, 2 * s.c.size());
  return s;
}

PhaseField to_physical(const SpectralField& s, double* imag_residue) {
  if (s.c.size() != s.grid->size()) throw std::invalid_argument("field: value/grid size mismatch");
  std::vector<cplx> work = s.c;
  fft_all_axes(work, *s.grid, true);
  PhaseField f(s.grid);
  double mre = 0.0, mim = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    f.v[i] = work[i].real();
    if (imag_residue) {
      mre = std::fmax(mre, std::fabs(work[i].real()));
      mim = std::fmax(mim, std::fabs(work[i].imag()));
    }
  }
  if (imag_residue) *imag_residue = mim / std::fmax(mre, 1e-300);
  return f;
}

double sup_norm(const PhaseField& f) { return simd::backend().rd_max_abs(f.v.data(), f.v.size()); }

double cell_sum(const PhaseField& f) {
  return simd::backend().rd_sum(f.v.data(), f.v.size()) * f.grid->cell();
}

double l1_norm(const PhaseField& f) {
  return simd::backend().rd_abs_sum(f.v.data(), f.v.size()) * f.grid->cell();
}

double l2_norm(const PhaseField& f) {
  return std::sqrt(simd::backend().rd_sum_sq(f.v.data(), f.v.size()) * f.grid->cell());
}

double spectral_l2(const SpectralField& s) {
  return std::sqrt(simd::backend().rd_sum_sq_z(s.c.data(), s.c.size()) * s.grid->vol());
}

void add_scaled(PhaseField& y, const PhaseField& x, double a) {
  check_same_grid(*y.grid, *x.grid);
  simd::backend().vd_axpy(y.v.data(), x.v.data(), a, y.v.size());
}

void add_scaled(SpectralField& y, const SpectralField& x, double a) {
  check_same_grid(*y.grid, *x.grid);
  simd::backend().vz_axpy_real(y.c.data(), x.c.data(), a, y.c.size());
}

PhaseField difference(const PhaseField& a, const PhaseField& b) {
  check_same_grid(*a.grid, *b.grid);
  PhaseField out = a;
  simd::backend().vd_axpy(out.v.data(), b.v.data(), -1.0, out.v.size());
  return out;
}

void scale(PhaseField& f, double a) {
  simd::backend().vd_scale(f.v.data(), f.v.data(), a, f.v.size());
}

void scale(SpectralField& f, double a) {
  simd::backend().vd_scale(reinterpret_cast<double*>(f.c.data()),
                           reinterpret_cast<const double*>(f.c.data()), a, 2 * f.c.size());
}

}  // namespace fkfp
