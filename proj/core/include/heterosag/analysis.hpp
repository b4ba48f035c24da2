#pragma once

#include <cstdint>
#include <vector>

#include "heterosag/protocol.hpp"
#include "heterosag/ss_matrix.hpp"

namespace heterosag {

/// Inputs of the closed-form quantization-error bounds.
struct ErrorBoundInput {
  int n_users = 0;                   // N
  int model_dim = 0;                 // m
  double r1 = -1.0;
  double r2 = 1.0;
  std::vector<int> quantizer_levels; // K_0 < K_1 < ... < K_{G-1}
  std::vector<int> subgroup_counts;  // L_g; all ones for the uniform bound
  int subgroup_size = 0;             // n (uniform) or n-bar

  int groups() const { return static_cast<int>(quantizer_levels.size()); }
  void validate() const;
};

struct SigmaResult {
  double bound = 0.0;  // the total quantization error bound (a variance)
  std::vector<long long> segments_per_quantizer;  // (2(G-g)-1) * n per g
};

/// Uniform-group bound:
///   (r2-r1)^2/(4N^2) * (m/G) * n * sum_g (2(G-g)-1)/(K_g-1)^2.
/// Throws config_error when the input carries subgroups; use the plus form.
SigmaResult sigma_heterosag(const ErrorBoundInput& input);

/// Subgroup layout bound:
///   (r2-r1)^2/(4N^2) * (m/Z) * nbar *
///       sum_g [sum_{j<L_g} (2(Z - Z_{g-1} - j) - 1)] / (K_g-1)^2.
/// Equal subgroup sizes required; collapses to sigma_heterosag for L == 1.
double sigma_heterosag_plus(const ErrorBoundInput& input);

/// Theorem 3: probability a subgroup of nbar users is left with exactly one
/// survivor under independent dropout probability p.
double privacy_leakage_prob(int nbar, double dropout_prob);

struct BandwidthExpansion {
  int encoded_bits = 0;  // ceil(log2(|S|(K-1)+1))
  int clear_bits = 0;    // ceil(log2 K)
  double ratio = 0.0;
};

/// Encoded-vs-clear width for one coalition of |S| users at K levels.
BandwidthExpansion bandwidth_expansion(std::uint64_t coalition_size,
                                       std::uint64_t levels_k);

/// Per-level and aggregate mask-operation counts for one user, plus the
/// SecAg reference (a single coalition of all N users).
struct MaskOpCounts {
  std::vector<int> pairwise_masks_per_element;  // by level, |S_l| - 1
  long long prg_symbols_per_user = 0;   // pairwise + private, whole vector
  long long secag_masks_per_element = 0;        // N - 1
};

MaskOpCounts count_mask_operations(const CoalitionPlan& plan,
                                   const Topology& topo);

}  // namespace heterosag
