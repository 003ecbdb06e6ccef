#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fkfp {

// mt19937_64 with hand-rolled output maps, so streams are identical across
// standard-library implementations (std distributions are not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {  // Box-Muller, cached second value
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    cached_ = r * std::sin(th);
    have_ = true;
    return r * std::cos(th);
  }

  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_ = false;
  double cached_ = 0.0;
};

}  // namespace fkfp
