#include "fkfp/core/shift.hpp"

#include <cmath>
#include <stdexcept>

#include "fkfp/core/fft.hpp"
#include "fkfp/core/threading.hpp"
#include "fkfp/simd/kernels.hpp"

namespace fkfp {

int axis_of(const TorusGrid& g, AxisKind k, int component) {
  if (component < 0 || component >= g.dim()) throw std::invalid_argument("axis_of: bad component");
  return k == AxisKind::X ? component : g.dim() + component;
}

namespace {

// apply per-mode factor fac[k] along `axis`
void apply_axis_factor(std::vector<cplx>& a, const TorusGrid& g, int axis,
                       const std::vector<cplx>& fac) {
  const auto& k = simd::backend();
  const int n = g.len(axis);
  const std::size_t S = g.stride(axis);
  const std::size_t block = static_cast<std::size_t>(n) * S;
  const std::size_t nblocks = g.size() / block;
  if (S == 1) {
    parallel_for(nblocks, [&](std::size_t b) {
      k.vz_mul(a.data() + b * block, a.data() + b * block, fac.data(), static_cast<std::size_t>(n));
    });
  } else {
    parallel_for(nblocks, [&](std::size_t b) {
      cplx* base = a.data() + b * block;
      for (int j = 0; j < n; ++j) k.vz_scale(base + j * S, base + j * S, fac[j], S);
    });
  }
}

}  // namespace

void shift_axis(SpectralField& f, int axis, double a) {
  const TorusGrid& g = *f.grid;
  const int n = g.len(axis);
  std::vector<cplx> fac(n);
  for (int i = 0; i < n; ++i) fac[i] = std::polar(1.0, -g.freq(axis, i) * a);
  apply_axis_factor(f.c, g, axis, fac);
}

SpectralField finite_difference_spectral(const SpectralField& f, int axis, double a) {
  const TorusGrid& g = *f.grid;
  const int n = g.len(axis);
  std::vector<cplx> fac(n);
  for (int i = 0; i < n; ++i) fac[i] = 1.0 - std::polar(1.0, -g.freq(axis, i) * a);
  SpectralField out = f;
  apply_axis_factor(out.c, g, axis, fac);
  return out;
}

PhaseField roll_difference(const PhaseField& f, int axis, int cells) {
  const TorusGrid& g = *f.grid;
  const int n = g.len(axis);
  const std::size_t S = g.stride(axis);
  const std::size_t block = static_cast<std::size_t>(n) * S;
  const std::size_t nblocks = g.size() / block;
  int c = cells % n;
  if (c < 0) c += n;
  PhaseField out(f.grid);
  for (std::size_t b = 0; b < nblocks; ++b) {
    const double* src = f.v.data() + b * block;
    double* dst = out.v.data() + b * block;
    for (int j = 0; j < n; ++j) {
      const int jm = (j - c + n) % n;
      const double* row = src + static_cast<std::size_t>(j) * S;
      const double* rshift = src + static_cast<std::size_t>(jm) * S;
      double* o = dst + static_cast<std::size_t>(j) * S;
      for (std::size_t i = 0; i < S; ++i) o[i] = row[i] - rshift[i];
    }
  }
  return out;
}

PhaseField finite_difference(const PhaseField& f, AxisKind kind, int component, double a) {
  const TorusGrid& g = *f.grid;
  const int axis = axis_of(g, kind, component);
  const double cell = g.box(axis) / g.len(axis);
  const double cells = a / cell;
  const double rounded = std::nearbyint(cells);
  if (std::fabs(cells - rounded) <= 1e-9 * std::fmax(1.0, std::fabs(cells)))
    return roll_difference(f, axis, static_cast<int>(rounded));
  SpectralField s = to_spectral(f);
  return to_physical(finite_difference_spectral(s, axis, a));
}

void characteristic_phase(std::vector<cplx>& mixed, const TorusGrid& g, double t) {
  if (t == 0.0) return;
  const int d = g.dim(), na = g.n_axes();
  const int nin = g.len(na - 1);                 // innermost v axis
  const std::size_t rows = g.size() / static_cast<std::size_t>(nin);
  const double dv = g.box(na - 1) / nin;
  const double v0 = -0.5 * g.box(na - 1);
  parallel_for(rows, [&](std::size_t row) {
    // decode the outer indices of this row
    std::size_t r = row;
    double xi[2] = {0, 0}, vouter = 0.0;
    for (int a = 0; a < na - 1; ++a) {
      const std::size_t stride_rows = g.stride(a) / static_cast<std::size_t>(nin);
      const std::size_t i = r / stride_rows;
      r %= stride_rows;
      if (a < d)
        xi[a] = g.freq_table(a)[i];
      else
        vouter += xi[a - d] * g.coord_table(a)[i];  // xi_c * v_c for outer v axes
    }
    const double xin = xi[d - 1];  // component conjugate to the inner v axis
    const double theta0 = -t * (vouter + xin * v0);
    const double dtheta = -t * xin * dv;
    cplx p = std::polar(1.0, theta0);
    const cplx step = std::polar(1.0, dtheta);
    cplx* rp = mixed.data() + row * static_cast<std::size_t>(nin);
    for (int j = 0; j < nin; ++j) {
      rp[j] *= p;
      p *= step;
    }
  });
}

}  // namespace fkfp
