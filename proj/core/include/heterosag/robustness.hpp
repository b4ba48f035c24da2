#pragma once

#include <vector>

#include "heterosag/ss_matrix.hpp"

namespace heterosag {

struct RobustnessResult {
  double delta = 0.0;
  std::vector<int> minimizing_columns;  // one argmin subset
  double alpha = 0.0;                   // decodable fraction for that subset
};

/// Exhaustive Definition-1 scan: over every nonempty proper column subset S,
/// a level is decodable when each of its coalitions lies fully inside or
/// fully outside S; delta is the minimum over S of the non-decodable
/// fraction. Refuses matrices wider than 20 columns.
RobustnessResult inference_robustness_bruteforce(const SSMatrix& matrix);

/// Theorem 1 / Theorem 4 closed form: (Z-2)/Z for even Z, (Z-1)/Z for odd.
/// Note: the brute-force scan shows the generated matrices only attain this
/// for Z prime or Z = 4; composite Z admits subsets closed under the row
/// involutions with delta = 1 - 1/spf(Z). See the robustness tests.
double inference_robustness_closed_form(int columns);

}  // namespace heterosag
