#include "heterosag/analysis.hpp"

#include <bit>
#include <cmath>

namespace heterosag {

void ErrorBoundInput::validate() const {
  if (quantizer_levels.empty()) throw config_error("error bound: no quantizers");
  for (std::size_t g = 0; g < quantizer_levels.size(); ++g) {
    if (quantizer_levels[g] < 2) throw config_error("error bound: K_g >= 2");
    if (g > 0 && quantizer_levels[g] <= quantizer_levels[g - 1]) {
      throw config_error("error bound: K_0 < K_1 < ... required");
    }
  }
  if (!(r1 < r2)) throw config_error("error bound: need r1 < r2");
  if (n_users < 1 || model_dim < 1 || subgroup_size < 1) {
    throw config_error("error bound: N, m, n must be positive");
  }
}

SigmaResult sigma_heterosag(const ErrorBoundInput& input) {
  input.validate();
  const int g_count = input.groups();
  if (!input.subgroup_counts.empty()) {
    for (int lg : input.subgroup_counts) {
      if (lg != 1) {
        throw config_error(
            "sigma_heterosag: subgroup layout given; use sigma_heterosag_plus");
      }
    }
  }
  if (input.n_users != g_count * input.subgroup_size) {
    throw config_error("sigma_heterosag: N must equal n * G");
  }
  SigmaResult res;
  const double range = input.r2 - input.r1;
  double sum = 0.0;
  for (int g = 0; g < g_count; ++g) {
    const long long segs = 2LL * (g_count - g) - 1;
    res.segments_per_quantizer.push_back(segs * input.subgroup_size);
    const double km1 = input.quantizer_levels[g] - 1;
    sum += static_cast<double>(segs) / (km1 * km1);
  }
  res.bound = range * range / (4.0 * input.n_users * input.n_users) *
              (static_cast<double>(input.model_dim) / g_count) *
              input.subgroup_size * sum;
  return res;
}

double sigma_heterosag_plus(const ErrorBoundInput& input) {
  input.validate();
  const int g_count = input.groups();
  std::vector<int> counts = input.subgroup_counts;
  if (counts.empty()) counts.assign(g_count, 1);
  if (static_cast<int>(counts.size()) != g_count) {
    throw config_error("sigma_heterosag_plus: one subgroup count per group");
  }
  int z = 0;
  for (int lg : counts) {
    if (lg < 1) throw config_error("sigma_heterosag_plus: L_g >= 1");
    z += lg;
  }
  if (input.n_users != z * input.subgroup_size) {
    throw config_error("sigma_heterosag_plus: N must equal nbar * Z");
  }
  const double range = input.r2 - input.r1;
  double sum = 0.0;
  int z_prefix = 0;  // Z_{g-1}
  for (int g = 0; g < g_count; ++g) {
    double inner = 0.0;
    for (int j = 0; j < counts[g]; ++j) inner += 2.0 * (z - z_prefix - j) - 1.0;
    const double km1 = input.quantizer_levels[g] - 1;
    sum += inner / (km1 * km1);
    z_prefix += counts[g];
  }
  return range * range / (4.0 * input.n_users * input.n_users) *
         (static_cast<double>(input.model_dim) / z) * input.subgroup_size * sum;
}

double privacy_leakage_prob(int nbar, double dropout_prob) {
  if (nbar < 1) throw config_error("privacy_leakage_prob: nbar >= 1");
  if (dropout_prob < 0.0 || dropout_prob > 1.0) {
    throw config_error("privacy_leakage_prob: p in [0, 1]");
  }
  // nbar * (1-p) * p^(nbar-1); p^0 == 1 even at p == 0.
  double tail = 1.0;
  for (int k = 0; k < nbar - 1; ++k) tail *= dropout_prob;
  return nbar * (1.0 - dropout_prob) * tail;
}

BandwidthExpansion bandwidth_expansion(std::uint64_t coalition_size,
                                       std::uint64_t levels_k) {
  if (coalition_size < 1 || levels_k < 2) {
    throw config_error("bandwidth_expansion: need |S| >= 1 and K >= 2");
  }
  BandwidthExpansion be;
  const std::uint64_t r = coalition_size * (levels_k - 1) + 1;
  be.encoded_bits = std::bit_width(r - 1);        // ceil(log2 R)
  be.clear_bits = std::bit_width(levels_k - 1);   // ceil(log2 K)
  be.ratio = static_cast<double>(be.encoded_bits) / be.clear_bits;
  return be;
}

MaskOpCounts count_mask_operations(const CoalitionPlan& plan,
                                   const Topology& topo) {
  MaskOpCounts counts;
  const int seg = topo.segment_len();
  // Every column sees the same pairwise-mask count profile per level; report
  // the profile of column 0's user as the per-user figure (the multiset of
  // coalition sizes per level is identical across columns).
  counts.prg_symbols_per_user = 0;
  for (int l = 0; l < plan.levels; ++l) {
    const Coalition& co = plan.at_level[l][plan.coalition_of_column[l][0]];
    const int size = static_cast<int>(co.columns.size()) * topo.subgroup_size;
    counts.pairwise_masks_per_element.push_back(size - 1);
    counts.prg_symbols_per_user += static_cast<long long>(size - 1) * seg;
  }
  counts.prg_symbols_per_user += topo.padded_dim();  // the private mask
  counts.secag_masks_per_element = topo.users() - 1;
  return counts;
}

}  // namespace heterosag
