#pragma once

#include <cstdint>
#include <cmath>

#include "amsim/geometry.hpp"

namespace amsim {

// Deterministic splitmix64 stream. Bit-identical on every platform, cheap to
// fork into independent substreams, which is what keeps sensor rendering and
// batch episodes reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // [0, n)
  int uniform_int(int n) {
    return n <= 0 ? 0 : static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Box-Muller; consumes two uniforms per draw.
  double gaussian() {
    double u1 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  Vec3 gaussian3(double sigma) {
    return Vec3(sigma * gaussian(), sigma * gaussian(), sigma * gaussian());
  }

  // Independent child stream keyed by a label; does not advance this stream.
  Rng substream(std::uint64_t label) const {
    return Rng(mix(mix(state_, 0x7F4A7C15D1B54A32ULL), label));
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace amsim
