#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mamc {

// splitmix64 finalizer, used to derive substream seeds from a master seed.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. The engine is mt19937_64 (bit-exact per the
// standard); all distribution mappings are implemented here rather than with
// std distributions so sequences are identical across standard libraries.
class RandomStream {
 public:
  RandomStream() : engine_(0) {}
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; consumes two uniforms per value.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.28318530717958647692528676655900577 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // [0, n), n > 0. Modulo bias is below 1e-12 for any n this project uses.
  std::size_t uniform_index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

 private:
  std::mt19937_64 engine_;
};

// Named substreams: independent streams derived from one master seed.
inline RandomStream substream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return RandomStream(mix64(master_seed + mix64(stream_id)));
}

}  // namespace mamc
