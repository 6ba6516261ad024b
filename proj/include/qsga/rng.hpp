#pragma once

#include <cstdint>
#include <stdexcept>

namespace qsga {

// Deterministic counter-based generator (splitmix64 core).  All randomized
// operations take one of these explicitly so that a run is reproducible
// bit-for-bit from its seed, independent of platform or standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform value in [0, bound) by rejection; exact, no modulo bias.
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::uniform: bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform_real() < p; }

  // Independent child stream; used to give each table entry / trial its own
  // stream derived from (seed, index) without sharing state.
  Rng substream(std::uint64_t index) const {
    Rng child(state_ ^ (0x6a09e667f3bcc909ULL + index * 0x3c6ef372fe94f82bULL));
    child.next_u64();
    return child;
  }

 private:
  std::uint64_t state_;
};

// Stateless hash of (seed, x) onto 64 bits; the counter construction behind
// lazily materialized random tables.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t x) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (x + 0x632be59bd9b4e019ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qsga
