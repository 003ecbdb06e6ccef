#pragma once

#include <complex>
#include <vector>

#include "fkfp/core/grid.hpp"

namespace fkfp {

using cplx = std::complex<double>;

// Scalar field on the (x,v) lattice.
struct PhaseField {
  GridPtr grid;
  std::vector<double> v;

  PhaseField() = default;
  explicit PhaseField(GridPtr g) : grid(std::move(g)), v(grid->size(), 0.0) {}
};

// Spectral counterpart under the project convention: the forward transform
// carries 1/N^{2d}, so c[0] is the field mean; the inverse carries no factor.
struct SpectralField {
  GridPtr grid;
  std::vector<cplx> c;

  SpectralField() = default;
  explicit SpectralField(GridPtr g) : grid(std::move(g)), c(grid->size(), cplx{}) {}
};

SpectralField to_spectral(const PhaseField& f);
// imag_residue, if given, receives max|Im| / max(|Re|, eps) before Im is dropped
PhaseField to_physical(const SpectralField& s, double* imag_residue = nullptr);

// reductions (deterministic kernels underneath)
double sup_norm(const PhaseField& f);
double cell_sum(const PhaseField& f);     // integral: sum * cell volume
double l1_norm(const PhaseField& f);      // cell-weighted sum of |f|
double l2_norm(const PhaseField& f);      // sqrt(cell-weighted sum of f^2)
double spectral_l2(const SpectralField& s);  // sqrt(vol * sum |c|^2); Parseval partner of l2_norm

// arithmetic (grids must match)
void add_scaled(PhaseField& y, const PhaseField& x, double a);   // y += a*x
void add_scaled(SpectralField& y, const SpectralField& x, double a);
PhaseField difference(const PhaseField& a, const PhaseField& b);
void scale(PhaseField& f, double a);
void scale(SpectralField& f, double a);

void check_same_grid(const TorusGrid& a, const TorusGrid& b);

}  // namespace fkfp
