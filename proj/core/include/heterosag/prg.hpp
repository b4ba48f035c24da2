#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace heterosag {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// A pairwise seed s_{i,j} or a private seed b_i, widened to a 64-bit
/// PRG key. Seeds agreed between two users are symmetric by construction.
struct Seed {
  std::uint64_t value = 0;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Encoding modulus R for one coalition. R = |S|(K-1)+1 guarantees the sum
/// of |S| quantized segments is representable without wrap-around.
struct RingModulus {
  std::uint64_t value;

  explicit RingModulus(std::uint64_t r) : value(r) {
    if (r < 2) throw std::invalid_argument("RingModulus: R must be >= 2");
  }

  static RingModulus for_coalition(std::uint64_t coalition_users,
                                   std::uint64_t levels_k) {
    if (coalition_users < 1 || levels_k < 2) {
      throw std::invalid_argument("RingModulus: need |S| >= 1 and K >= 2");
    }
    return RingModulus(coalition_users * (levels_k - 1) + 1);
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    return (a + b) % value;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return (a + value - b % value) % value;
  }
};

/// Counter-mode generator over splitmix64 with rejection sampling into
/// [0, R). Rejection keeps every symbol exactly uniform; plain modulo
/// reduction would bias small residues and fail the uniformity gate.
class CounterPrg {
 public:
  explicit CounterPrg(Seed seed) : key_(seed.value) {}

  std::uint64_t next_word() {
    return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * (++counter_));
  }

  std::uint64_t next_below(std::uint64_t modulus) {
    const std::uint64_t zone = modulus * (UINT64_MAX / modulus);
    for (;;) {
      const std::uint64_t w = next_word();
      if (w < zone) return w % modulus;
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Deterministic expansion of a seed to `length` symbols in Z_R.
std::vector<std::uint64_t> prg_expand(Seed seed, std::size_t length,
                                      RingModulus modulus);

/// Independent per-segment-level subseed. HeteroSAg masks each level in its
/// own ring Z_R, so one stream per (seed, level) pair is required.
inline Seed level_seed(Seed base, int level) {
  return Seed{splitmix64(base.value + 0x9E3779B97F4A7C15ULL *
                                          (static_cast<std::uint64_t>(level) + 1))};
}

}  // namespace heterosag
