#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dctnn/types.hpp"

namespace dctnn {

// mt19937_64 plus hand-rolled distributions. The engine's output sequence is
// pinned by the standard; std:: distributions are not, and bitwise
// reproducibility of seeded runs is part of the contract here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  Real uniform() { return static_cast<Real>(engine_() >> 11) * 0x1.0p-53; }

  Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Box-Muller; one value per call, the pair's partner is discarded to keep
  // the draw sequence simple to reason about.
  Real normal() {
    Real u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const Real u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Real normal(Real mean, Real stddev) { return mean + stddev * normal(); }

  // Normal(0, stddev) resampled until within 2 stddev.
  Real truncated_normal(Real stddev) {
    Real x;
    do {
      x = normal();
    } while (std::abs(x) > 2.0);
    return stddev * x;
  }

  // Derives an independent stream, e.g. one per dataset item.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

inline void fill_truncated_normal(Mat& m, Real stddev, Rng& rng) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rng.truncated_normal(stddev);
}

inline void fill_uniform(Mat& m, Real lo, Real hi, Rng& rng) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(lo, hi);
}

}  // namespace dctnn
