#include "fkfp/core/fft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "fkfp/core/threading.hpp"
#include "fkfp/simd/kernels.hpp"

namespace fkfp {

FftPlan::FftPlan(int n) : n_(n) {
  if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: length must be a power of two >= 2");
  bitrev_.resize(n);
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1) << (bits - 1 - b);
    bitrev_[i] = r;
  }
  std::size_t total = 0;
  for (int len = 2; len <= n; len <<= 1) {
    stage_off_.push_back(total);
    total += static_cast<std::size_t>(len / 2);
  }
  twf_.resize(total);
  twi_.resize(total);
  std::size_t off = 0;
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len / 2;
    for (int j = 0; j < half; ++j) {
      const double ang = -2.0 * M_PI * j / len;
      twf_[off + j] = std::polar(1.0, ang);
      twi_[off + j] = std::conj(twf_[off + j]);
    }
    off += half;
  }
}

const FftPlan& FftPlan::get(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<FftPlan>> plans;
  std::lock_guard<std::mutex> lk(mu);
  auto it = plans.find(n);
  if (it == plans.end()) it = plans.emplace(n, std::unique_ptr<FftPlan>(new FftPlan(n))).first;
  return *it->second;
}

void FftPlan::transform(cplx* d, bool inverse) const {
  const auto& k = simd::backend();
  for (int i = 0; i < n_; ++i) {
    const int j = bitrev_[i];
    if (i < j) std::swap(d[i], d[j]);
  }
  const std::vector<cplx>& tw = inverse ? twi_ : twf_;
  std::size_t stage = 0;
  for (int len = 2; len <= n_; len <<= 1, ++stage) {
    const int half = len / 2;
    const cplx* w = tw.data() + stage_off_[stage];
    for (int start = 0; start < n_; start += len)
      k.bf_tw(d + start, d + start + half, w, static_cast<std::size_t>(half));
  }
}

void FftPlan::transform_strided(cplx* base, std::size_t span, std::size_t col0, std::size_t ncols,
                                bool inverse) const {
  const auto& k = simd::backend();
  auto row = [&](int r) { return base + static_cast<std::size_t>(r) * span + col0; };
  for (int i = 0; i < n_; ++i) {
    const int j = bitrev_[i];
    if (i < j) std::swap_ranges(row(i), row(i) + ncols, row(j));
  }
  const std::vector<cplx>& tw = inverse ? twi_ : twf_;
  std::size_t stage = 0;
  for (int len = 2; len <= n_; len <<= 1, ++stage) {
    const int half = len / 2;
    const cplx* w = tw.data() + stage_off_[stage];
    for (int start = 0; start < n_; start += len)
      for (int j = 0; j < half; ++j)
        k.bf_span(row(start + j), row(start + half + j), w[j], ncols);
  }
}

void fft_axis(std::vector<cplx>& a, const TorusGrid& g, int axis, bool inverse) {
  const int n = g.len(axis);
  const std::size_t S = g.stride(axis);
  const std::size_t total = g.size();
  const FftPlan& plan = FftPlan::get(n);
  if (S == 1) {
    const std::size_t rows = total / static_cast<std::size_t>(n);
    parallel_for(rows, [&](std::size_t r) { plan.transform(a.data() + r * n, inverse); });
  } else {
    const std::size_t block = static_cast<std::size_t>(n) * S;
    const std::size_t nblocks = total / block;
    const std::size_t chunk = 4096;
    const std::size_t cpb = (S + chunk - 1) / chunk;
    parallel_for(nblocks * cpb, [&](std::size_t idx) {
      const std::size_t b = idx / cpb, c = idx % cpb;
      const std::size_t col0 = c * chunk;
      const std::size_t nc = std::min(chunk, S - col0);
      plan.transform_strided(a.data() + b * block, S, col0, nc, inverse);
    });
  }
}

void fft_all_axes(std::vector<cplx>& a, const TorusGrid& g, bool inverse) {
  for (int ax = 0; ax < g.n_axes(); ++ax) fft_axis(a, g, ax, inverse);
}

void fft_x_axes(std::vector<cplx>& a, const TorusGrid& g, bool inverse) {
  for (int ax = 0; ax < g.dim(); ++ax) fft_axis(a, g, ax, inverse);
}

void fft_v_axes(std::vector<cplx>& a, const TorusGrid& g, bool inverse) {
  for (int ax = g.dim(); ax < g.n_axes(); ++ax) fft_axis(a, g, ax, inverse);
}

}  // namespace fkfp
