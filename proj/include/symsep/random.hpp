#pragma once

// Reproducible randomness. All sampling in the library flows through Rng so
// that a fixed seed yields identical results across platforms; gaussians are
// produced by an explicit Box-Muller transform rather than
// std::normal_distribution, whose output is implementation-defined.

#include "symsep/core.hpp"

#include <random>

namespace symsep {

// splitmix64 finalizer; decorrelates consecutive stream indices.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent child seed for the index-th stream of a run; sampling loops
// draw one stream per item so results do not depend on evaluation order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  Complex gaussian_complex() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im);
  }

  // Haar-distributed pure state: normalized complex-gaussian vector.
  PureState haar_state(int n) {
    if (n < 1) throw dimension_error("haar_state: need n >= 1");
    Vector v(n);
    double norm2 = 0.0;
    do {
      for (int i = 0; i < n; ++i) {
        v(i) = gaussian_complex();
      }
      norm2 = v.squaredNorm();
    } while (norm2 <= 0.0);
    return PureState(v / std::sqrt(norm2));
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace symsep
