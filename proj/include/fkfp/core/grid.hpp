#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "fkfp/core/params.hpp"

namespace fkfp {

// Periodic phase-space lattice [-Lx/2, Lx/2)^d x [-Lv/2, Lv/2)^d with
// power-of-two points per axis. Axes 0..d-1 are x, axes d..2d-1 are v; flat
// storage is row-major with the last v axis fastest. Frequencies follow FFT
// ordering k -> m = k (k < N/2), k - N (k >= N/2), xi = 2*pi*m/L; the
// unpaired Nyquist mode at k = N/2 must be zeroed when applying odd symbols.
class TorusGrid {
 public:
  TorusGrid(int d, int nx, int nv, double Lx, double Lv);

  int dim() const { return d_; }
  int n_axes() const { return 2 * d_; }
  bool is_x_axis(int a) const { return a < d_; }
  int len(int a) const { return is_x_axis(a) ? nx_ : nv_; }
  double box(int a) const { return is_x_axis(a) ? Lx_ : Lv_; }
  int nx() const { return nx_; }
  int nv() const { return nv_; }
  double Lx() const { return Lx_; }
  double Lv() const { return Lv_; }

  std::size_t size() const { return size_; }
  std::size_t stride(int a) const { return strides_[a]; }

  double coord(int a, int i) const { return coords_[a][i]; }
  double freq(int a, int i) const { return freqs_[a][i]; }
  int fidx(int a, int i) const { return i < len(a) / 2 ? i : i - len(a); }
  bool nyquist(int a, int i) const { return i == len(a) / 2; }

  const std::vector<double>& coord_table(int a) const { return coords_[a]; }
  const std::vector<double>& freq_table(int a) const { return freqs_[a]; }

  double cell() const { return cell_; }    // cell volume
  double vol() const { return vol_; }      // box volume

  bool same(const TorusGrid& o) const {
    return d_ == o.d_ && nx_ == o.nx_ && nv_ == o.nv_ && Lx_ == o.Lx_ && Lv_ == o.Lv_;
  }

 private:
  int d_, nx_, nv_;
  double Lx_, Lv_;
  std::size_t size_;
  double cell_, vol_;
  std::vector<std::size_t> strides_;
  std::vector<std::vector<double>> coords_, freqs_;
};

using GridPtr = std::shared_ptr<const TorusGrid>;

GridPtr make_grid(int d, int nx, int nv, double Lx, double Lv);

// Box sizes the kernel tails need at time t (polynomial tails carry <= 1e-3
// of mass outside when L >= 20 * spread): spread_x = t^{1/alpha+1},
// spread_v = t^{1/alpha}.
double tail_rule_Lx(double t, const Params& p);
double tail_rule_Lv(double t, const Params& p);
bool box_large_enough(const TorusGrid& g, double t, const Params& p);

}  // namespace fkfp
