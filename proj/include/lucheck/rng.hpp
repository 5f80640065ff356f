#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace lucheck {

// Deterministic random source.  The mt19937_64 integer stream is fixed by the
// standard, and the uniform/normal mappings below are written out explicitly,
// so a seed reproduces the same doubles on any IEEE-754 platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  // Uniform in (lo, hi]; never returns exactly lo.
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (second value cached).
  double gauss();

  // Standard complex normal: independent N(0,1) real and imaginary parts.
  std::complex<double> cgauss();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stateless mixer used to derive independent per-restart seeds from one base
// seed without correlating the streams.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace lucheck
