#include "heterosag/keys.hpp"

namespace heterosag {

KeyPair generate_keypair(const DhGroup& group, std::mt19937_64& rng) {
  PrimeField field(group.prime);
  KeyPair kp;
  kp.secret = 1 + rng() % (group.subgroup_order - 1);
  kp.public_key = field.pow(group.generator, kp.secret);
  return kp;
}

Seed derive_pairwise_seed(const DhGroup& group, std::uint64_t secret_i,
                          std::uint64_t public_j) {
  if (secret_i == 0 || secret_i >= group.subgroup_order) {
    throw std::invalid_argument("derive_pairwise_seed: secret outside group");
  }
  if (!group.valid_public_key(public_j)) {
    throw std::invalid_argument(
        "derive_pairwise_seed: public key not in the agreed group");
  }
  PrimeField field(group.prime);
  if (public_j == field.pow(group.generator, secret_i)) {
    throw std::invalid_argument(
        "derive_pairwise_seed: self-pairing (the protocol never pairs a user "
        "with itself)");
  }
  const std::uint64_t shared = field.pow(public_j, secret_i);
  return Seed{splitmix64(shared)};
}

}  // namespace heterosag
