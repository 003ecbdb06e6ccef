#include <cmath>
#include <stdexcept>

#include "fkfp/core/rng.hpp"
#include "fkfp/core/symbols.hpp"
#include "fkfp/verify/verify.hpp"

namespace fkfp::verify {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_double(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

void subtract_mean(PhaseField& f) {
  const double mean = cell_sum(f) / f.grid->vol();
  for (auto& x : f.v) x -= mean;
}

void normalize_sup(PhaseField& f, double amplitude) {
  const double s = sup_norm(f);
  if (s > 0.0) scale(f, amplitude / s);
}

}  // namespace

PhaseField gaussian_bump(GridPtr g, double amplitude, double sigx, double sigv) {
  PhaseField f(g);
  const int d = g->dim();
  for_each_mode(*g, [&](std::size_t flat, const int* idx, const double*, const double*) {
    double qx = 0.0, qv = 0.0;
    for (int a = 0; a < g->n_axes(); ++a) {
      const double c = g->coord_table(a)[idx[a]];
      if (a < d)
        qx += c * c;
      else
        qv += c * c;
    }
    f.v[flat] = amplitude * std::exp(-0.5 * qx / (sigx * sigx) - 0.5 * qv / (sigv * sigv));
  });
  subtract_mean(f);
  return f;
}

// Solver-facing fields carry a Gaussian v-envelope (sigma = Lv/16): the
// characteristic shear x -> x - t v is exact pointwise, but a field with O(1)
// values at the v-boundary stops being v-periodic after the shear (the shift
// jumps by t*Lv across the wrap), and later spectral multipliers would act on
// the wrap artifact. The envelope keeps that content at the 1e-14 level.
namespace {
void apply_v_envelope(PhaseField& f) {
  const TorusGrid& g = *f.grid;
  const int d = g.dim();
  for_each_mode(g, [&](std::size_t flat, const int* idx, const double*, const double*) {
    double q = 0.0;
    for (int a = d; a < 2 * d; ++a) {
      const double v = g.coord_table(a)[idx[a]];
      const double s = g.box(a) / 16.0;
      q += 0.5 * v * v / (s * s);
    }
    f.v[flat] *= std::exp(-q);
  });
}
}  // namespace

PhaseField multimode(GridPtr g, double amplitude, std::uint64_t seed, int band) {
  PhaseField f(g);
  const int d = g->dim();
  Rng rng(seed);
  const int nmodes = 40;
  struct Mode {
    double k[4];
    double amp, phase;
  };
  std::vector<Mode> modes;
  for (int m = 0; m < nmodes; ++m) {
    Mode mo{};
    double q = 0.0;
    bool zero = true;
    for (int a = 0; a < 2 * d; ++a) {
      const int mi = static_cast<int>(std::floor(rng.uniform(-band, band + 1)));
      if (mi != 0) zero = false;
      mo.k[a] = 2.0 * M_PI * mi / g->box(a);
      q += static_cast<double>(mi) * mi;
    }
    if (zero) {
      --m;
      continue;
    }
    mo.amp = std::exp(-0.15 * q);
    mo.phase = rng.uniform(0.0, 2.0 * M_PI);
    modes.push_back(mo);
  }
  for_each_mode(*g, [&](std::size_t flat, const int* idx, const double*, const double*) {
    double z[4];
    for (int a = 0; a < 2 * d; ++a) z[a] = g->coord_table(a)[idx[a]];
    double val = 0.0;
    for (const auto& mo : modes) {
      double ph = mo.phase;
      for (int a = 0; a < 2 * d; ++a) ph += mo.k[a] * z[a];
      val += mo.amp * std::cos(ph);
    }
    f.v[flat] = val;
  });
  apply_v_envelope(f);
  subtract_mean(f);
  normalize_sup(f, amplitude);
  return f;
}

PhaseField rough_marginal(GridPtr g, const Params& p, double amplitude, std::uint64_t seed) {
  const double kp = p.kappa();
  const double pexp = p.d * (2.0 + p.alpha) / p.alpha - kp + 0.1;
  const auto P = p_symbol(*g, p);

  SpectralField s(g);
  const int na = g->n_axes();
  for_each_mode(*g, [&](std::size_t flat, const int* idx, const double*, const double*) {
    // drop the mean and the unpaired Nyquist rows
    bool skip = true;
    for (int a = 0; a < na; ++a)
      if (idx[a] != 0) skip = false;
    for (int a = 0; a < na; ++a)
      if (g->nyquist(a, idx[a])) skip = true;
    if (skip) {
      s.c[flat] = cplx{};
      return;
    }
    // order-free deterministic phase, antisymmetric under k -> -k
    std::uint64_t lo = 0;
    double sign = 0.0;
    for (int a = 0; a < na; ++a) {
      const int m = g->fidx(a, idx[a]);
      lo = lo * 8191 + static_cast<std::uint64_t>(std::abs(m));
      if (sign == 0.0 && m != 0) sign = m > 0 ? 1.0 : -1.0;
    }
    const double phi = sign * 2.0 * M_PI * unit_double(splitmix64(seed ^ lo));
    const double mag = std::pow(1.0 + P[flat], -pexp);
    s.c[flat] = std::polar(mag, phi);
  });
  PhaseField f = to_physical(s);
  apply_v_envelope(f);
  subtract_mean(f);
  normalize_sup(f, amplitude);
  return f;
}

PhaseField family_field(const std::string& name, GridPtr g, const Params& p, double amplitude,
                        double sigx, double sigv, std::uint64_t seed) {
  if (name == "gaussian") return gaussian_bump(std::move(g), amplitude, sigx, sigv);
  if (name == "multimode") return multimode(std::move(g), amplitude, seed);
  if (name == "rough") return rough_marginal(std::move(g), p, amplitude, seed);
  throw std::invalid_argument("data.family: unknown family '" + name + "'");
}

}  // namespace fkfp::verify
