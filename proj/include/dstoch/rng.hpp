#pragma once

// Deterministic random source for the randomized harnesses. splitmix64 with
// rejection-sampled bounded draws, so identical seeds reproduce bit-for-bit
// on every platform (std::uniform_int_distribution does not guarantee that).

#include <cstdint>

#include "rational.hpp"

namespace dstoch {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

  /// Uniform draw in [lo, hi] inclusive.
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Positive rational with numerator in [1, max_num] and denominator in [1, max_den].
  Rational positive_rational(long max_num, long max_den) {
    return Rational(range(1, max_num), range(1, max_den));
  }

private:
  std::uint64_t state_;
};

} // namespace dstoch
