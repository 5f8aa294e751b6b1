#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hawkes {

// Deterministic random stream with cheap substream derivation.
// All distributions are implemented on top of raw 64-bit draws so that a
// given (seed, substream) pair produces identical sequences regardless of
// platform or standard-library version.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(mix(seed)) {}

  // Derives an independent stream from a seed and up to three indices
  // (e.g. trial index, process role, replicate). Streams for distinct
  // index tuples are decorrelated by splitmix64 finalizers.
  static RngStream substream(std::uint64_t seed, std::uint64_t a,
                             std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix(seed + 0x9e3779b97f4a7c15ull);
    s = mix(s ^ mix(a + 0x7f4a7c159e3779b9ull));
    s = mix(s ^ mix(b + 0x2545f4914f6cdd1dull));
    s = mix(s ^ mix(c + 0x6a09e667f3bcc909ull));
    return RngStream(s);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Exponential with the given rate; uniform() < 1 keeps the log finite.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  // Standard normal via the polar method; one spare is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hawkes
