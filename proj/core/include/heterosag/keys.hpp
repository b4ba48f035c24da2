#pragma once

#include <cstdint>
#include <random>

#include "heterosag/field.hpp"
#include "heterosag/prg.hpp"

namespace heterosag {

/// Toy-parameter prime-order group for pairwise seed agreement.
/// The 32-bit modulus is nowhere near cryptographically hard; the privacy
/// argument of the scheme is information-theoretic masking, not DH hardness.
struct DhGroup {
  std::uint64_t prime;           // safe prime p = 2q + 1
  std::uint64_t subgroup_order;  // q
  std::uint64_t generator;       // generator of the order-q subgroup

  static DhGroup toy() { return DhGroup{2147483783ULL, 1073741891ULL, 4ULL}; }

  bool valid_public_key(std::uint64_t pk) const {
    if (pk <= 1 || pk >= prime) return false;
    return PrimeField(prime).pow(pk, subgroup_order) == 1;
  }
};

struct KeyPair {
  std::uint64_t secret = 0;      // s^SK in [1, q)
  std::uint64_t public_key = 0;  // g^secret mod p
};

KeyPair generate_keypair(const DhGroup& group, std::mt19937_64& rng);

/// Shared seed s_{i,j} = f(pk_j^{sk_i}); symmetric in (i, j).
/// Throws std::invalid_argument on keys outside the group or self-pairing.
Seed derive_pairwise_seed(const DhGroup& group, std::uint64_t secret_i,
                          std::uint64_t public_j);

}  // namespace heterosag
