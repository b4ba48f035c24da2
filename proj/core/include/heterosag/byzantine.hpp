#pragma once

#include <random>
#include <vector>

namespace heterosag {

enum class AttackKind { none, gaussian, sign_flip, label_flip };

struct AttackSpec {
  AttackKind kind = AttackKind::none;
  double sigma = 5.0;              // gaussian replacement std
  double multiplier = -5.0;        // sign-flip factor
  int label_shift = -9;            // label-flip: applied to labels upstream
  double label_multiplier = 30.0;  // label-flip: scales the resulting update
  std::vector<int> byzantine_users;

  bool is_byzantine(int user) const;
};

/// Byzantine tolerance of the median defense: ceil(0.25 * groups) - 1.
int max_byzantine(int group_count);

/// Element-wise median across equal-length segments; even counts take the
/// mean of the two middle values.
std::vector<double> coordinate_median(
    const std::vector<std::vector<double>>& segments);

/// Applies the vector-level part of an attack to a clear update, in place.
/// gaussian replaces entries, sign_flip scales by `multiplier`, label_flip
/// scales by `label_multiplier` (the label shift itself happens in the data
/// layer, before the gradient is computed).
void inject_attack(std::vector<double>& update, const AttackSpec& spec,
                   std::mt19937_64& rng);

}  // namespace heterosag
