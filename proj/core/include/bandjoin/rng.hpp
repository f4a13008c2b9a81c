// Deterministic random-number utilities. Hand-rolled (splitmix64) instead of
// <random> distributions so that identical seeds produce identical streams on
// every platform and standard library.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace bandjoin {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stateless mix of several words; used for order-independent per-tuple
/// randomization (1-Bucket cell choice).
inline uint64_t hash_mix(uint64_t a, uint64_t b, uint64_t c, uint64_t d = 0) {
  uint64_t s = a * 0x9E3779B97F4A7C15ULL;
  s ^= splitmix64(b);
  s = s * 0xFF51AFD7ED558CCDULL + c;
  s ^= splitmix64(d);
  uint64_t t = s;
  return splitmix64(t);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, bound) without modulo bias (Lemire's method).
  uint64_t next_below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng: bound must be > 0");
    while (true) {
      uint64_t x = next_u64();
      __uint128_t m = static_cast<__uint128_t>(x) * bound;
      uint64_t lo = static_cast<uint64_t>(m);
      if (lo >= bound || lo >= (-bound) % bound)
        return static_cast<uint64_t>(m >> 64);
    }
  }

  /// Uniform double in [0, 1) with 53 bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  uint64_t state_;
};

/// k distinct indices out of [0, n), uniform without replacement, in the
/// order selected (partial Fisher-Yates on an index map).
std::vector<size_t> inline sample_without_replacement(size_t n, size_t k,
                                                      Rng& rng) {
  if (k > n)
    throw std::invalid_argument("sample_without_replacement: k > n");
  // Sparse Fisher-Yates: only touched slots are materialized.
  std::vector<size_t> out;
  out.reserve(k);
  std::unordered_map<size_t, size_t> moved;
  auto lookup = [&](size_t slot) {
    auto it = moved.find(slot);
    return it == moved.end() ? slot : it->second;
  };
  for (size_t i = 0; i < k; ++i) {
    size_t j = i + static_cast<size_t>(rng.next_below(n - i));
    out.push_back(lookup(j));
    moved[j] = lookup(i);
  }
  return out;
}

}  // namespace bandjoin
