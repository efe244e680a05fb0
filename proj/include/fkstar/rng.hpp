#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fkstar {

// mt19937_64 keyed by (seed, stream). Distributions are written out here so a
// stream never depends on the standard library's distribution internals.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_open() { return 1.0 - uniform(); }

  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  // Uniform integer in [0, n), n > 0. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = bits();
    while (x >= limit) x = bits();
    return x % n;
  }

  bool coin() { return (bits() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fkstar
