#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fkfp/core/grid.hpp"

namespace fkfp {

using cplx = std::complex<double>;

// Iterative radix-2 DIT transform for one power-of-two length, unnormalized.
// Plans (bit-reversal table + per-stage twiddles) are cached per length.
class FftPlan {
 public:
  static const FftPlan& get(int n);

  // contiguous transform of length n
  void transform(cplx* d, bool inverse) const;

  // n rows of `ncols` contiguous complex values starting at base + r*span +
  // col0; butterflies act across rows, so this is the transform along a
  // strided axis batched over the contiguous inner block
  void transform_strided(cplx* base, std::size_t span, std::size_t col0, std::size_t ncols,
                         bool inverse) const;

  int length() const { return n_; }

 private:
  explicit FftPlan(int n);
  int n_;
  std::vector<int> bitrev_;
  std::vector<cplx> twf_, twi_;          // concatenated per-stage twiddles
  std::vector<std::size_t> stage_off_;
};

// transform along one grid axis, in place (unnormalized)
void fft_axis(std::vector<cplx>& a, const TorusGrid& g, int axis, bool inverse);

void fft_all_axes(std::vector<cplx>& a, const TorusGrid& g, bool inverse);
void fft_x_axes(std::vector<cplx>& a, const TorusGrid& g, bool inverse);
void fft_v_axes(std::vector<cplx>& a, const TorusGrid& g, bool inverse);

}  // namespace fkfp
