#include "fkfp/core/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fkfp {

namespace {
bool pow2(int n) { return n >= 2 && (n & (n - 1)) == 0; }
}

TorusGrid::TorusGrid(int d, int nx, int nv, double Lx, double Lv)
    : d_(d), nx_(nx), nv_(nv), Lx_(Lx), Lv_(Lv) {
  if (d != 1 && d != 2) throw std::invalid_argument("grid.d: only 1 or 2");
  if (!pow2(nx) || !pow2(nv)) throw std::invalid_argument("grid.n: points per axis must be powers of two");
  if (!(Lx > 0.0) || !(Lv > 0.0)) throw std::invalid_argument("grid.L: box lengths must be positive");

  const int na = 2 * d_;
  size_ = 1;
  for (int a = 0; a < na; ++a) size_ *= static_cast<std::size_t>(len(a));
  strides_.assign(na, 1);
  for (int a = na - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * static_cast<std::size_t>(len(a + 1));

  cell_ = 1.0;
  vol_ = 1.0;
  coords_.resize(na);
  freqs_.resize(na);
  for (int a = 0; a < na; ++a) {
    const int n = len(a);
    const double L = box(a);
    cell_ *= L / n;
    vol_ *= L;
    coords_[a].resize(n);
    freqs_[a].resize(n);
    for (int i = 0; i < n; ++i) {
      coords_[a][i] = -0.5 * L + L * static_cast<double>(i) / n;
      const int m = i < n / 2 ? i : i - n;
      freqs_[a][i] = 2.0 * M_PI * m / L;
    }
  }
}

GridPtr make_grid(int d, int nx, int nv, double Lx, double Lv) {
  return std::make_shared<const TorusGrid>(d, nx, nv, Lx, Lv);
}

double tail_rule_Lx(double t, const Params& p) { return 20.0 * std::pow(t, 1.0 / p.alpha + 1.0); }
double tail_rule_Lv(double t, const Params& p) { return 20.0 * std::pow(t, 1.0 / p.alpha); }

bool box_large_enough(const TorusGrid& g, double t, const Params& p) {
  return g.Lx() >= tail_rule_Lx(t, p) && g.Lv() >= tail_rule_Lv(t, p);
}

}  // namespace fkfp
