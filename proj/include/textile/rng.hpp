#pragma once

#include <cstdint>

namespace textile {

// splitmix64 generator. Small state, one-word seeding, identical output on
// every platform, which is what the seeded-determinism contract needs.
struct SplitMix64 {
  uint64_t state = 0;

  SplitMix64() = default;
  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n >= 1. Rejection keeps it unbiased.
  uint64_t next_below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      const uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }
};

inline uint64_t hash_combine(uint64_t h, uint64_t v) {
  SplitMix64 m(h ^ (v + 0x9e3779b97f4a7c15ULL));
  return m.next();
}

// Derives an independent stream seed from coordinates such as
// (base seed, generation, member slot, purpose tag). Streams with distinct
// coordinates never share state, so members can be processed in any order
// or in parallel without changing the result.
inline uint64_t derive_stream(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t h = hash_combine(seed, a);
  h = hash_combine(h, b);
  h = hash_combine(h, c);
  return h;
}

}  // namespace textile
