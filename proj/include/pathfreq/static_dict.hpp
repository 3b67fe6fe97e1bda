#pragma once

#include <cstdint>
#include <vector>

#include "pathfreq/util.hpp"

namespace pathfreq {

// Static perfect-hash dictionary over nonzero uint64 keys (FKS scheme): a
// first-level split into ~n buckets, then per-bucket quadratic-space tables
// with per-bucket seeds retried until injective.  O(1) worst-case lookups,
// O(n) expected construction and space.
class U64Dict {
 public:
  U64Dict() = default;

  void build(const std::vector<std::uint64_t>& keys,
             const std::vector<std::uint32_t>& values, std::uint64_t seed) {
    n_buckets_ = keys.empty() ? 1 : keys.size();
    seed_ = seed;
    std::vector<std::vector<int>> bucket(n_buckets_);
    for (size_t k = 0; k < keys.size(); ++k)
      bucket[slot(keys[k])].push_back(static_cast<int>(k));
    off_.assign(n_buckets_ + 1, 0);
    bseed_.assign(n_buckets_, 0);
    std::size_t total = 0;
    for (size_t b = 0; b < n_buckets_; ++b) {
      std::size_t m = bucket[b].size();
      off_[b] = total;
      total += m * m;
    }
    off_[n_buckets_] = total;
    key_.assign(total, 0);
    val_.assign(total, 0);
    SplitMix64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (size_t b = 0; b < n_buckets_; ++b) {
      std::size_t m = bucket[b].size();
      if (m == 0) continue;
      std::size_t base = off_[b], width = m * m;
      for (;;) {
        std::uint64_t s = rng.next() | 1;
        bool ok = true;
        for (int id : bucket[b]) {
          std::size_t p = base + inner(keys[id], s, width);
          if (key_[p] != 0) { ok = false; break; }
          key_[p] = keys[id];
          val_[p] = values[id];
        }
        if (ok) { bseed_[b] = s; break; }
        for (std::size_t p = base; p < base + width; ++p) key_[p] = 0;
      }
    }
  }

  // Returns the stored value, or `miss` when the key is absent.
  std::uint32_t get(std::uint64_t key, std::uint32_t miss = 0xffffffffu) const {
    std::size_t b = slot(key);
    std::size_t base = off_[b], width = off_[b + 1] - base;
    if (width == 0) return miss;
    std::size_t p = base + inner(key, bseed_[b], width);
    return key_[p] == key ? val_[p] : miss;
  }

  bool contains(std::uint64_t key) const { return raw_hit(key); }

  std::size_t memory_words() const { return key_.size() + (val_.size() + 1) / 2 + off_.size(); }

 private:
  bool raw_hit(std::uint64_t key) const {
    std::size_t b = slot(key);
    std::size_t base = off_[b], width = off_[b + 1] - base;
    if (width == 0) return false;
    return key_[base + inner(key, bseed_[b], width)] == key;
  }
  std::size_t slot(std::uint64_t key) const { return mix64(key ^ seed_) % n_buckets_; }
  static std::size_t inner(std::uint64_t key, std::uint64_t s, std::size_t width) {
    return static_cast<std::size_t>(mix64(key * s)) % width;
  }

  std::size_t n_buckets_ = 1;
  std::uint64_t seed_ = 0;
  std::vector<std::size_t> off_;
  std::vector<std::uint64_t> bseed_, key_;
  std::vector<std::uint32_t> val_;
};

// Fixed-capacity bitset used for sub-block presence masks; capacity is set at
// build time and shared across all masks of one dictionary.
class SmallBitset {
 public:
  SmallBitset() = default;
  explicit SmallBitset(int bits) : words_((bits + 63) / 64, 0) {}
  void set(int k) { words_[k >> 6] |= 1ULL << (k & 63); }
  bool test(int k) const { return (words_[k >> 6] >> (k & 63)) & 1; }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  int size_words() const { return static_cast<int>(words_.size()); }
  std::uint64_t word(int k) const { return words_[k]; }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace pathfreq
