#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "heterosag/keys.hpp"
#include "heterosag/prg.hpp"
#include "heterosag/quantizer.hpp"
#include "heterosag/shamir.hpp"
#include "heterosag/ss_matrix.hpp"

namespace heterosag {

struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct protocol_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Static round layout: who sits in which column, which quantizer each group
/// carries, and how the model vector splits into segments.
struct Topology {
  std::vector<int> subgroup_counts;  // L_g; all ones for the uniform layout
  int subgroup_size = 0;             // users per column (n or n-bar)
  std::vector<int> quantizer_levels; // K_g per group, strictly increasing
  double r1 = -1.0;
  double r2 = 1.0;
  int model_dim = 0;                 // m before padding

  int groups() const { return static_cast<int>(subgroup_counts.size()); }
  int columns() const;
  int users() const { return columns() * subgroup_size; }
  int padded_dim() const;
  int segment_len() const { return padded_dim() / columns(); }
  int column_of_user(int user) const { return user / subgroup_size; }
  bool uniform() const;
  void validate() const;  // throws config_error
};

/// Immutable per-round machinery derived from a Topology.
struct ProtocolContext {
  Topology topo;
  SSMatrix matrix;
  CoalitionPlan plan;
  PrimeField share_field;
  DhGroup dh;
  int threshold;  // ceil(N/2) + 1

  const Coalition& coalition_at(int level, int column) const {
    return plan.at_level[level][plan.coalition_of_column[level][column]];
  }
  std::vector<int> coalition_users(const Coalition& c) const;
  int coalition_user_count(const Coalition& c) const {
    return static_cast<int>(c.columns.size()) * topo.subgroup_size;
  }
  QuantizerSpec quantizer_of(const Coalition& c) const {
    return QuantizerSpec(topo.quantizer_levels[c.quantizer_group], topo.r1,
                         topo.r2);
  }
  RingModulus ring_of(const Coalition& c) const {
    return RingModulus::for_coalition(coalition_user_count(c),
                                      topo.quantizer_levels[c.quantizer_group]);
  }
  /// Transcript bits one user sends per round.
  std::uint64_t bits_per_round(int user) const;
};

ProtocolContext make_context(const Topology& topo);

struct UserState {
  int id = -1;
  int column = 0;
  KeyPair keys;
  std::vector<Seed> pairwise;        // [other user id]; slot id unused
  std::uint64_t private_seed = 0;    // b_i, an element of the share field
  std::vector<SecretShare> held_seed_shares;  // share of b_j held here, [j]
  std::vector<SecretShare> held_key_shares;   // share of sk_j held here, [j]
  std::vector<double> update;        // x_i, length m
};

/// Steps 1-2: key agreement, pairwise seeds, private seeds, and Shamir
/// sharing of both secrets to all N users at threshold ceil(N/2)+1.
std::vector<UserState> setup_round(const ProtocolContext& ctx,
                                   std::mt19937_64& rng);

/// One encoded segment as it travels to the server.
struct MaskedSegment {
  int user = -1;
  int level = 0;
  int coalition = 0;   // index within the level's coalition list
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> payload;  // entries in [0, modulus)
};

/// Step 3 plus the integer mapping of Step 4: clip, pad, and stochastically
/// quantize each segment with its coalition's quantizer. Exposed separately
/// so tests can compare the decode path against a mask-free sum oracle.
std::vector<std::vector<int>> quantize_update(const ProtocolContext& ctx,
                                              const UserState& user,
                                              std::mt19937_64& rng);

/// Step 4 masking: y = x-bar + PRG(b_i) + sum_{j>i} PRG(s_ij) - sum_{j<i}
/// PRG(s_ji) mod R, with j ranging over the user's coalition at each level.
std::vector<MaskedSegment> mask_update(
    const ProtocolContext& ctx, const UserState& user,
    const std::vector<std::vector<int>>& quantized);

std::vector<MaskedSegment> encode_segments(const ProtocolContext& ctx,
                                           const UserState& user,
                                           std::mt19937_64& rng);

struct DecodedSegment {
  int level = 0;
  int coalition = 0;
  std::vector<int> survivors;
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> integer_sum;  // sum of survivor levels, in Z_R
  std::vector<double> real_sum;            // dequantized survivor sum
  bool leak = false;   // exactly one survivor: its segment decodes in clear
  bool empty = false;  // whole coalition dropped
};

struct RoundOutcome {
  std::vector<DecodedSegment> segments;
  std::vector<int> survivors_per_level;          // distinct users decoded
  std::vector<std::uint64_t> bits_per_user;      // transcript bits actually sent
  int leak_events = 0;
  int empty_coalitions = 0;
};

/// What the server is allowed to see: masked segments, public keys, and the
/// shares survivors hand over -- b_i shares for survivors, private-key shares
/// for dropped users, never both for the same user.
RoundOutcome server_decode(const ProtocolContext& ctx,
                           const std::vector<MaskedSegment>& received,
                           const std::vector<char>& dropped,
                           const std::vector<UserState>& users);

/// Step 5 reassembly: per level, coalition sums are dequantized and added;
/// levels concatenate in order and the pad is stripped.
std::vector<double> reassemble(const ProtocolContext& ctx,
                               const RoundOutcome& outcome);

}  // namespace heterosag
