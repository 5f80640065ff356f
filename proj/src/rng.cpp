#include "lucheck/rng.hpp"

#include <cmath>

namespace lucheck {

double Rng::uniform01() {
  // Top 53 bits of the generator output map exactly onto [0, 1).
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return hi - (hi - lo) * uniform01();
}

double Rng::gauss() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0,1] x [0,1): u1 > 0 keeps the log finite.
  double u1 = 1.0 - uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * M_PI * u2;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

std::complex<double> Rng::cgauss() {
  double re = gauss();
  double im = gauss();
  return {re, im};
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace lucheck
