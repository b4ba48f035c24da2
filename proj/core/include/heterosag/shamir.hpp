#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "heterosag/field.hpp"

namespace heterosag {

/// One evaluation of the sharing polynomial. `index` is the nonzero
/// evaluation point (user index + 1); `owner` identifies whose secret
/// this share belongs to.
struct SecretShare {
  int owner = -1;
  std::uint64_t index = 0;
  std::uint64_t value = 0;
  int threshold = 0;
};

// Production field: first prime >= 2^31, wide enough for seeds and toy
// private keys. The small field enables exhaustive secrecy enumeration.
inline PrimeField shamir_field_production() { return PrimeField(2147483659ULL); }
inline PrimeField shamir_field_small() { return PrimeField(257ULL); }

/// Split `secret` into n shares with reconstruction threshold t, evaluation
/// points 1..n. Throws std::invalid_argument when t > n or t < 1.
std::vector<SecretShare> shamir_share(std::uint64_t secret, int threshold,
                                      int share_count, const PrimeField& field,
                                      std::mt19937_64& rng, int owner = -1);

/// Lagrange interpolation at zero. Requires at least `threshold` shares with
/// distinct indices; surplus consistent shares are accepted.
std::uint64_t shamir_reconstruct(std::span<const SecretShare> shares,
                                 const PrimeField& field);

}  // namespace heterosag
