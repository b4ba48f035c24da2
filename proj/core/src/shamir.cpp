#include "heterosag/shamir.hpp"

#include <unordered_set>

namespace heterosag {

std::vector<SecretShare> shamir_share(std::uint64_t secret, int threshold,
                                      int share_count, const PrimeField& field,
                                      std::mt19937_64& rng, int owner) {
  if (threshold < 1 || threshold > share_count) {
    throw std::invalid_argument("shamir_share: need 1 <= t <= n");
  }
  // f(x) = secret + a_1 x + ... + a_{t-1} x^{t-1}, coefficients uniform.
  std::vector<std::uint64_t> coeffs(threshold);
  coeffs[0] = field.reduce(secret);
  for (int k = 1; k < threshold; ++k) coeffs[k] = rng() % field.prime;

  std::vector<SecretShare> shares;
  shares.reserve(share_count);
  for (int i = 0; i < share_count; ++i) {
    const std::uint64_t x = static_cast<std::uint64_t>(i) + 1;
    std::uint64_t y = 0;
    for (int k = threshold - 1; k >= 0; --k) y = field.add(field.mul(y, x), coeffs[k]);
    shares.push_back(SecretShare{owner, x, y, threshold});
  }
  return shares;
}

std::uint64_t shamir_reconstruct(std::span<const SecretShare> shares,
                                 const PrimeField& field) {
  if (shares.empty()) {
    throw std::invalid_argument("shamir_reconstruct: no shares");
  }
  const int t = shares.front().threshold;
  if (static_cast<int>(shares.size()) < t) {
    throw std::invalid_argument("shamir_reconstruct: fewer shares than threshold");
  }
  std::unordered_set<std::uint64_t> seen;
  for (const auto& s : shares) {
    if (s.threshold != t) {
      throw std::invalid_argument("shamir_reconstruct: mixed threshold metadata");
    }
    if (s.index == 0 || !seen.insert(s.index).second) {
      throw std::invalid_argument("shamir_reconstruct: malformed share indices");
    }
  }
  // Lagrange interpolation at x = 0 over the first t shares.
  std::uint64_t secret = 0;
  for (int i = 0; i < t; ++i) {
    std::uint64_t num = 1, den = 1;
    for (int j = 0; j < t; ++j) {
      if (i == j) continue;
      num = field.mul(num, shares[j].index);
      den = field.mul(den, field.sub(shares[j].index, shares[i].index));
    }
    const std::uint64_t w = field.mul(num, field.inv(den));
    secret = field.add(secret, field.mul(shares[i].value, w));
  }
  return secret;
}

}  // namespace heterosag
