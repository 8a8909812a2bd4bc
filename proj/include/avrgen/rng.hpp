#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace avrgen {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  return splitmix64(s);
}

// Deterministic counter-free PRNG with labeled substreams. A fork is derived
// from the stream's identity seed, never from consumed state, so adding a new
// purpose label or drawing extra values from one stream cannot shift another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(mix64(seed, 0x5DEECE66DULL)) {}

  Rng fork(std::string_view label) const { return Rng(mix64(seed_, fnv1a64(label))); }
  Rng fork(std::string_view label, std::uint64_t index) const {
    return Rng(mix64(mix64(seed_, fnv1a64(label)), index));
  }

  std::uint64_t next() { return splitmix64(state_); }

  // Unbiased integer in [0, n).
  std::uint64_t uniform(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return (next() & 1) != 0; }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[uniform(items.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

// Stable per-puzzle seed: (base namespace seed, split label, pattern, index).
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view split_label,
                                 int pattern_index, std::uint64_t puzzle_index) {
  return mix64(mix64(mix64(base, fnv1a64(split_label)),
                     static_cast<std::uint64_t>(pattern_index)),
               puzzle_index);
}

}  // namespace avrgen
