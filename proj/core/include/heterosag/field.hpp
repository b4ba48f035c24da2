#pragma once

#include <cstdint>
#include <stdexcept>

namespace heterosag {

/// Prime field arithmetic for secret sharing and the toy key-exchange group.
/// All primes used here are below 2^32, so products fit in 64 bits.
struct PrimeField {
  std::uint64_t prime;

  explicit PrimeField(std::uint64_t p) : prime(p) {
    if (p < 2 || p >= (1ULL << 32)) {
      throw std::invalid_argument("PrimeField: prime must be in [2, 2^32)");
    }
  }

  std::uint64_t reduce(std::uint64_t a) const { return a % prime; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    return (a + b) % prime;
  }

  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return (a + prime - b % prime) % prime;
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return (a % prime) * (b % prime) % prime;
  }

  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const {
    std::uint64_t acc = 1;
    base %= prime;
    while (exp > 0) {
      if (exp & 1) acc = mul(acc, base);
      base = mul(base, base);
      exp >>= 1;
    }
    return acc;
  }

  // Fermat inverse; prime field, so any nonzero element is invertible.
  std::uint64_t inv(std::uint64_t a) const {
    a %= prime;
    if (a == 0) throw std::invalid_argument("PrimeField: inverse of zero");
    return pow(a, prime - 2);
  }
};

}  // namespace heterosag
