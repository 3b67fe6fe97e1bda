#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pathfreq {

// Input/format problem (bad tree file, bad query script, bad argument values).
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal contract violation surfaced to callers (out-of-range node, missing
// precondition on an operation, ...).
struct QueryError : std::runtime_error {
  explicit QueryError(const std::string& msg) : std::runtime_error(msg) {}
};

// SplitMix64: tiny splittable deterministic generator.  We use it everywhere
// randomness is needed so that identical seeds give identical output on every
// platform (std::uniform_int_distribution is implementation-defined).
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Derive an independent child stream; parent state advances once.
  SplitMix64 split() { return SplitMix64(next() ^ 0x6a09e667f3bcc909ull); }

  // Uniform value in [0, bound) via 128-bit multiply (bound > 0).
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Uniform value in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double unit() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ull;
  x ^= x >> 33;
  return x;
}

inline int ceil_log2(std::uint64_t x) {
  int k = 0;
  while ((1ull << k) < x) ++k;
  return k;
}

inline std::int64_t ceil_sqrt(std::int64_t x) {
  if (x <= 0) return 0;
  std::int64_t r = static_cast<std::int64_t>(__builtin_sqrtl(static_cast<long double>(x)));
  while (r * r < x) ++r;
  while ((r - 1) * (r - 1) >= x) --r;
  return r;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace pathfreq
