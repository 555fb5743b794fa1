#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <string_view>
#include <vector>

namespace hdx {

/// Deterministic 64-bit PRNG (SplitMix64, Steele & Vigna 2014).
///
/// Every random draw in this library flows through this generator so that
/// a given seed reproduces the same experiment on any platform. The integer
/// stream is bit-exact everywhere; derived floating-point values go through
/// the usual libm functions and are stable for a given toolchain.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
  uint64_t next_below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const uint64_t x = next();
      if (x >= threshold) return x % n;
    }
  }

  /// Standard normal via Box-Muller.
  double next_normal() {
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double next_normal(double mean, double stddev) {
    return mean + stddev * next_normal();
  }

  /// First `take` elements of a Fisher-Yates shuffle of 0..n-1.
  std::vector<uint32_t> sample_indices(uint32_t n, uint32_t take) {
    std::vector<uint32_t> idx(n);
    for (uint32_t i = 0; i < n; ++i) idx[i] = i;
    if (take > n) take = n;
    for (uint32_t i = 0; i < take; ++i) {
      const uint32_t j = i + static_cast<uint32_t>(next_below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(take);
    return idx;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = next_below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

/// FNV-1a hash, used to fold string ids into seed material.
inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Folds a list of parts into one sub-stream seed. Order-sensitive.
inline uint64_t seed_mix(std::initializer_list<uint64_t> parts) {
  SplitMix64 g(0x8db4c1a9f7e35b61ull);
  uint64_t h = g.next();
  for (uint64_t p : parts) {
    SplitMix64 inner(h ^ p);
    h = inner.next();
  }
  return h;
}

}  // namespace hdx
