#include "heterosag/protocol.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "heterosag/transcript.hpp"

namespace heterosag {

int Topology::columns() const {
  return std::accumulate(subgroup_counts.begin(), subgroup_counts.end(), 0);
}

int Topology::padded_dim() const {
  const int z = columns();
  return (model_dim + z - 1) / z * z;
}

bool Topology::uniform() const {
  return std::all_of(subgroup_counts.begin(), subgroup_counts.end(),
                     [](int l) { return l == 1; });
}

void Topology::validate() const {
  if (subgroup_counts.empty()) throw config_error("topology: no groups");
  if (static_cast<int>(quantizer_levels.size()) != groups()) {
    throw config_error("topology: one quantizer per group required");
  }
  for (int lg : subgroup_counts) {
    if (lg < 1) throw config_error("topology: subgroup counts must be >= 1");
  }
  for (std::size_t g = 0; g < quantizer_levels.size(); ++g) {
    if (quantizer_levels[g] < 2) throw config_error("topology: K_g >= 2");
    if (g > 0 && quantizer_levels[g] <= quantizer_levels[g - 1]) {
      throw config_error("topology: quantizer levels must increase strictly");
    }
  }
  if (subgroup_size < 1) throw config_error("topology: subgroup size >= 1");
  if (columns() < 2) throw config_error("topology: need at least 2 columns");
  if (model_dim < 1) throw config_error("topology: model_dim >= 1");
  if (!(r1 < r2)) throw config_error("topology: need r1 < r2");
}

std::vector<int> ProtocolContext::coalition_users(const Coalition& c) const {
  std::vector<int> users;
  users.reserve(coalition_user_count(c));
  for (int col : c.columns) {
    for (int k = 0; k < topo.subgroup_size; ++k) {
      users.push_back(col * topo.subgroup_size + k);
    }
  }
  return users;
}

std::uint64_t ProtocolContext::bits_per_round(int user) const {
  const int column = topo.column_of_user(user);
  std::uint64_t bits = 0;
  for (int l = 0; l < plan.levels; ++l) {
    const Coalition& co = coalition_at(l, column);
    const std::uint64_t r = ring_of(co).value;
    bits += static_cast<std::uint64_t>(topo.segment_len()) *
            std::bit_width(r - 1);
  }
  return bits;
}

ProtocolContext make_context(const Topology& topo) {
  topo.validate();
  SSMatrix matrix = topo.uniform() ? build_ss_matrix(topo.groups())
                                   : build_ss_matrix_hetero(topo.subgroup_counts);
  CoalitionPlan plan = coalition_plan(matrix);
  const int threshold = topo.users() / 2 + 1 + (topo.users() % 2);
  return ProtocolContext{topo, std::move(matrix), std::move(plan),
                         shamir_field_production(), DhGroup::toy(), threshold};
}

std::vector<UserState> setup_round(const ProtocolContext& ctx,
                                   std::mt19937_64& rng) {
  const int n = ctx.topo.users();
  std::vector<UserState> users(n);
  for (int i = 0; i < n; ++i) {
    users[i].id = i;
    users[i].column = ctx.topo.column_of_user(i);
    users[i].keys = generate_keypair(ctx.dh, rng);
    users[i].private_seed = rng() % ctx.share_field.prime;
    users[i].pairwise.assign(n, Seed{});
    users[i].held_seed_shares.resize(n);
    users[i].held_key_shares.resize(n);
  }
  // Pairwise seed agreement; both derivations must coincide.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Seed sij = derive_pairwise_seed(ctx.dh, users[i].keys.secret,
                                            users[j].keys.public_key);
      const Seed sji = derive_pairwise_seed(ctx.dh, users[j].keys.secret,
                                            users[i].keys.public_key);
      if (!(sij == sji)) throw protocol_error("pairwise seed asymmetry");
      users[i].pairwise[j] = sij;
      users[j].pairwise[i] = sij;
    }
  }
  // Everyone Shamir-shares b_i and the private key to all N users.
  for (int i = 0; i < n; ++i) {
    auto seed_shares = shamir_share(users[i].private_seed, ctx.threshold, n,
                                    ctx.share_field, rng, i);
    auto key_shares = shamir_share(users[i].keys.secret, ctx.threshold, n,
                                   ctx.share_field, rng, i);
    for (int holder = 0; holder < n; ++holder) {
      users[holder].held_seed_shares[i] = seed_shares[holder];
      users[holder].held_key_shares[i] = key_shares[holder];
    }
  }
  return users;
}

std::vector<std::vector<int>> quantize_update(const ProtocolContext& ctx,
                                              const UserState& user,
                                              std::mt19937_64& rng) {
  if (static_cast<int>(user.update.size()) != ctx.topo.model_dim) {
    throw protocol_error("quantize_update: update length does not match m");
  }
  const int seg = ctx.topo.segment_len();
  std::vector<double> padded(user.update);
  padded.resize(ctx.topo.padded_dim(), 0.0);

  std::vector<std::vector<int>> levels(ctx.plan.levels);
  for (int l = 0; l < ctx.plan.levels; ++l) {
    const QuantizerSpec spec = ctx.quantizer_of(ctx.coalition_at(l, user.column));
    levels[l].resize(seg);
    for (int k = 0; k < seg; ++k) {
      levels[l][k] = quantize(padded[l * seg + k], spec, rng);
    }
  }
  return levels;
}

std::vector<MaskedSegment> mask_update(
    const ProtocolContext& ctx, const UserState& user,
    const std::vector<std::vector<int>>& quantized) {
  if (static_cast<int>(quantized.size()) != ctx.plan.levels) {
    throw protocol_error("mask_update: plan/model shape mismatch");
  }
  const int seg = ctx.topo.segment_len();
  std::vector<MaskedSegment> out;
  out.reserve(ctx.plan.levels);
  for (int l = 0; l < ctx.plan.levels; ++l) {
    const Coalition& co = ctx.coalition_at(l, user.column);
    const RingModulus ring = ctx.ring_of(co);
    MaskedSegment ms;
    ms.user = user.id;
    ms.level = l;
    ms.coalition = ctx.plan.coalition_of_column[l][user.column];
    ms.modulus = ring.value;
    ms.payload.resize(seg);
    for (int k = 0; k < seg; ++k) {
      ms.payload[k] = static_cast<std::uint64_t>(quantized[l][k]) % ring.value;
    }
    const auto own = prg_expand(level_seed(Seed{user.private_seed}, l), seg, ring);
    for (int k = 0; k < seg; ++k) ms.payload[k] = ring.add(ms.payload[k], own[k]);
    for (int j : ctx.coalition_users(co)) {
      if (j == user.id) continue;
      const auto z = prg_expand(level_seed(user.pairwise[j], l), seg, ring);
      for (int k = 0; k < seg; ++k) {
        ms.payload[k] = user.id < j ? ring.add(ms.payload[k], z[k])
                                    : ring.sub(ms.payload[k], z[k]);
      }
    }
    out.push_back(std::move(ms));
  }
  return out;
}

std::vector<MaskedSegment> encode_segments(const ProtocolContext& ctx,
                                           const UserState& user,
                                           std::mt19937_64& rng) {
  return mask_update(ctx, user, quantize_update(ctx, user, rng));
}

namespace {

/// The share material the server may collect: for survivors the b_i shares,
/// for dropped users the private-key shares, never both for one user.
struct ServerView {
  std::vector<std::uint64_t> public_keys;
  std::vector<std::uint64_t> private_seeds;  // reconstructed, survivors only
  std::vector<std::uint64_t> secret_keys;    // reconstructed, dropped only
};

ServerView collect_and_reconstruct(const ProtocolContext& ctx,
                                   const std::vector<char>& dropped,
                                   const std::vector<UserState>& users) {
  const int n = static_cast<int>(users.size());
  ServerView view;
  view.public_keys.resize(n);
  view.private_seeds.assign(n, 0);
  view.secret_keys.assign(n, 0);
  for (int i = 0; i < n; ++i) view.public_keys[i] = users[i].keys.public_key;

  int survivors = 0;
  for (int i = 0; i < n; ++i) survivors += !dropped[i];
  if (survivors < ctx.threshold) {
    throw protocol_error("server_decode: fewer survivors than the secret "
                         "sharing threshold; reconstruction failed");
  }
  for (int target = 0; target < n; ++target) {
    std::vector<SecretShare> shares;
    for (int holder = 0; holder < n; ++holder) {
      if (dropped[holder]) continue;
      shares.push_back(dropped[target]
                           ? users[holder].held_key_shares[target]
                           : users[holder].held_seed_shares[target]);
    }
    const std::uint64_t secret = shamir_reconstruct(shares, ctx.share_field);
    if (dropped[target]) {
      view.secret_keys[target] = secret;
    } else {
      view.private_seeds[target] = secret;
    }
  }
  return view;
}

}  // namespace

RoundOutcome server_decode(const ProtocolContext& ctx,
                           const std::vector<MaskedSegment>& received,
                           const std::vector<char>& dropped,
                           const std::vector<UserState>& users) {
  const int n = ctx.topo.users();
  if (static_cast<int>(dropped.size()) != n) {
    throw protocol_error("server_decode: dropout mask size mismatch");
  }
  const int seg = ctx.topo.segment_len();
  const ServerView view = collect_and_reconstruct(ctx, dropped, users);

  // Segments from delayed/dropped users are excluded even if present.
  // index by (level, coalition, user)
  std::vector<std::vector<std::vector<const MaskedSegment*>>> table(
      ctx.plan.levels);
  for (int l = 0; l < ctx.plan.levels; ++l) {
    table[l].resize(ctx.plan.at_level[l].size());
  }
  RoundOutcome outcome;
  outcome.bits_per_user.assign(n, 0);
  for (const MaskedSegment& ms : received) {
    if (ms.user < 0 || ms.user >= n || dropped[ms.user]) continue;
    if (ms.level < 0 || ms.level >= ctx.plan.levels ||
        ms.coalition >= static_cast<int>(table[ms.level].size()) ||
        static_cast<int>(ms.payload.size()) != seg) {
      throw protocol_error("server_decode: malformed segment record");
    }
    table[ms.level][ms.coalition].push_back(&ms);
    outcome.bits_per_user[ms.user] += transcript_bits(ms);
  }

  outcome.survivors_per_level.assign(ctx.plan.levels, 0);
  for (int l = 0; l < ctx.plan.levels; ++l) {
    for (std::size_t k = 0; k < ctx.plan.at_level[l].size(); ++k) {
      const Coalition& co = ctx.plan.at_level[l][k];
      const RingModulus ring = ctx.ring_of(co);
      const QuantizerSpec spec = ctx.quantizer_of(co);
      DecodedSegment dec;
      dec.level = l;
      dec.coalition = static_cast<int>(k);
      dec.modulus = ring.value;

      const auto members = ctx.coalition_users(co);
      for (int u : members) {
        if (!dropped[u]) dec.survivors.push_back(u);
      }
      outcome.survivors_per_level[l] += static_cast<int>(dec.survivors.size());
      if (dec.survivors.empty()) {
        dec.empty = true;
        ++outcome.empty_coalitions;
        outcome.segments.push_back(std::move(dec));
        continue;
      }
      if (static_cast<int>(table[l][k].size()) !=
          static_cast<int>(dec.survivors.size())) {
        throw protocol_error("server_decode: missing segment from a survivor");
      }

      std::vector<std::uint64_t> acc(seg, 0);
      for (const MaskedSegment* ms : table[l][k]) {
        if (ms->modulus != ring.value) {
          throw protocol_error("server_decode: segment modulus mismatch");
        }
        for (int i = 0; i < seg; ++i) acc[i] = ring.add(acc[i], ms->payload[i]);
      }
      // Remove the private masks of survivors.
      for (int u : dec.survivors) {
        const auto own =
            prg_expand(level_seed(Seed{view.private_seeds[u]}, l), seg, ring);
        for (int i = 0; i < seg; ++i) acc[i] = ring.sub(acc[i], own[i]);
      }
      // Remove the dangling pairwise masks of dropped members.
      for (int d : members) {
        if (!dropped[d]) continue;
        for (int j : members) {
          if (j == d) continue;
          const Seed sdj =
              derive_pairwise_seed(ctx.dh, view.secret_keys[d], view.public_keys[j]);
          const auto z = prg_expand(level_seed(sdj, l), seg, ring);
          for (int i = 0; i < seg; ++i) {
            acc[i] = d < j ? ring.sub(acc[i], z[i]) : ring.add(acc[i], z[i]);
          }
        }
      }
      dec.integer_sum = std::move(acc);
      dec.real_sum.resize(seg);
      for (int i = 0; i < seg; ++i) {
        dec.real_sum[i] = dequantize_aggregate(
            dec.integer_sum[i], static_cast<int>(dec.survivors.size()), spec);
      }
      if (dec.survivors.size() == 1) {
        dec.leak = true;
        ++outcome.leak_events;
      }
      outcome.segments.push_back(std::move(dec));
    }
  }
  return outcome;
}

std::vector<double> reassemble(const ProtocolContext& ctx,
                               const RoundOutcome& outcome) {
  const int seg = ctx.topo.segment_len();
  std::vector<double> global(ctx.topo.padded_dim(), 0.0);
  std::vector<char> seen(ctx.plan.levels, 0);
  for (const DecodedSegment& dec : outcome.segments) {
    seen[dec.level] = 1;
    if (dec.empty) continue;
    for (int i = 0; i < seg; ++i) global[dec.level * seg + i] += dec.real_sum[i];
  }
  for (int l = 0; l < ctx.plan.levels; ++l) {
    if (!seen[l]) {
      throw protocol_error("reassemble: level " + std::to_string(l) +
                           " missing from the round outcome");
    }
  }
  global.resize(ctx.topo.model_dim);
  return global;
}

}  // namespace heterosag
