#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace wealthnet {

// SplitMix64 (Steele/Lea/Flood). The generator behind every random choice
// in this project. Chosen because the whole algorithm fits in a dozen
// lines, produces identical streams on every platform, and makes it cheap
// to derive independent sub-streams from one master seed.
//
// Stream derivation: each purpose gets a label ("wealth", "topology",
// "experiment") and an index (ensemble member). The stream state is seeded
// as
//     mix(mix(master_seed ^ fnv1a64(label)) + GOLDEN * index)
// so draws for one purpose never move when an unrelated stream consumes
// more or fewer values.
namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t splitmix_mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace detail

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view label,
            std::uint64_t index = 0)
      : state_(detail::splitmix_mix(
            detail::splitmix_mix(master_seed ^ detail::fnv1a64(label)) +
            detail::kGolden * index)) {}

  std::uint64_t next_u64() {
    state_ += detail::kGolden;
    return detail::splitmix_mix(state_);
  }

  // Uniform double in [0, 1), 53 significant bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  // Inverse-CDF exponential draw; no rejection loop, so streams stay
  // aligned across platforms.
  double next_exponential(double rate) {
    return -std::log1p(-next_unit()) / rate;
  }

 private:
  std::uint64_t state_;
};

// Fisher-Yates prefix: permutes `pool` in place so that the first k
// entries are a uniform draw without replacement. k may equal pool.size(),
// giving a full permutation.
template <typename T>
void shuffle_prefix(std::vector<T>& pool, std::size_t k, RngStream& rng) {
  const std::size_t n = pool.size();
  if (k > n) k = n;
  for (std::size_t i = 0; i + 1 < n && i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
    std::swap(pool[i], pool[j]);
  }
}

}  // namespace wealthnet
