#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

namespace chaosmarket {

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * Reproducible per-run random stream.
 *
 * A SplitMix64 generator whose starting state is derived from (seed, stream):
 * run j of an ensemble always sees the same variates whatever the thread
 * layout.  Gaussians use the Marsaglia polar method on 53-bit uniforms in
 * (-1, 1); the second variate of each accepted pair is cached.  Both
 * transforms are part of the output contract and must not change.
 */
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream)
      : state_(mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    return u * factor;
  }

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

}  // namespace chaosmarket
