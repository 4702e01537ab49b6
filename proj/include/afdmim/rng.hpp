// rng.hpp - deterministic random number generator for simulation streams
//
// A small splitmix64-based generator is used instead of <random> engines so
// that every stream is cheap to seed per frame and results are identical
// across standard library implementations.
#pragma once

#include "afdmim/types.hpp"

#include <cstdint>

namespace afdmim {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound).
  int uniform_int(int bound) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(bound));
  }

  std::uint8_t bit() { return static_cast<std::uint8_t>(next_u64() >> 63); }

  // Zero-mean circularly symmetric complex Gaussian with E|z|^2 = variance,
  // generated by one Box-Muller transform.
  Complex cgauss(double variance);

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from a master seed and two stream labels
// (for sweeps: the SNR point label and the frame index).
std::uint64_t derive_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b);

}  // namespace afdmim
