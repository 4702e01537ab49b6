// rng.cpp - Box-Muller sampling and stream derivation
#include "afdmim/rng.hpp"

#include <cmath>

namespace afdmim {

Complex Rng::cgauss(double variance) {
  // Box-Muller on (0,1] x [0,1); u1 is kept away from zero so log is finite.
  double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = uniform();
  double r = std::sqrt(-variance * std::log(u1));
  double phi = 2.0 * M_PI * u2;
  return Complex(r * std::cos(phi), r * std::sin(phi));
}

std::uint64_t derive_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  // Two mixing rounds of the splitmix64 finalizer over the packed labels.
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t s = mix(master + 0x9e3779b97f4a7c15ULL * (a + 1));
  return mix(s ^ (0xd1b54a32d192ed03ULL * (b + 1)));
}

}  // namespace afdmim
