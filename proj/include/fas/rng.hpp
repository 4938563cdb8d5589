#pragma once

#include <cmath>
#include <cstdint>

namespace fas {

// SplitMix64 counter generator: the state walks the golden-ratio sequence and
// the output is a bijective finalizer of the state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1]; never returns 0 so logs stay finite.
  double next_unit() { return (double(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Stream seed for chunk `chunk_index` of a master seed. This mixing function
// is part of the reproducibility contract: identical (seed, chunk layout)
// must replay identical streams across runs of the same build.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t chunk_index) {
  std::uint64_t z = master_seed ^ (0x9e3779b97f4a7c15ull * (chunk_index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Standard normal pairs via the Marsaglia polar variant of Box-Muller.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  void pair(double& z0, double& z1) {
    double u, v, s;
    do {
      u = 2.0 * rng_.next_unit() - 1.0;
      v = 2.0 * rng_.next_unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    z0 = u * m;
    z1 = v * m;
  }

 private:
  SplitMix64 rng_;
};

}  // namespace fas
