#pragma once

#include <cmath>
#include <cstdint>

namespace cellscape {

// Counter-based randomness: every consumer derives its own key from
// (seed, domain tag, indices), so any sub-window of the synthetic data
// regenerates identically regardless of evaluation order or thread count.
inline uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline uint64_t mix_key(uint64_t a, uint64_t b) { return mix64(a ^ mix64(b)); }
inline uint64_t mix_key(uint64_t a, uint64_t b, uint64_t c) { return mix_key(mix_key(a, b), c); }
inline uint64_t mix_key(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
  return mix_key(mix_key(a, b, c), d);
}

// Small splitmix64 stream seeded from a key.
class KeyedRng {
public:
  explicit KeyedRng(uint64_t key) : state_(key) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double next_unit_pos() { return 1.0 - next_unit(); }

  // Standard normal via Box-Muller.
  double next_normal() {
    const double u1 = next_unit_pos();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  int64_t next_poisson(double lambda);

private:
  uint64_t state_;
};

}  // namespace cellscape
