#include "heterosag/robustness.hpp"

#include <cstdint>
#include <stdexcept>

namespace heterosag {

RobustnessResult inference_robustness_bruteforce(const SSMatrix& matrix) {
  const int Z = matrix.size;
  if (Z > 20) {
    throw std::invalid_argument(
        "inference_robustness_bruteforce: more than 20 columns; use the "
        "closed form");
  }
  // Coalition membership as column bitmasks, one list per level.
  const CoalitionPlan plan = coalition_plan(matrix);
  std::vector<std::vector<std::uint32_t>> masks(Z);
  for (int l = 0; l < Z; ++l) {
    for (const Coalition& co : plan.at_level[l]) {
      std::uint32_t m = 0;
      for (int c : co.columns) m |= 1u << c;
      masks[l].push_back(m);
    }
  }

  RobustnessResult best;
  best.delta = 2.0;
  const std::uint32_t full = (Z == 32) ? ~0u : (1u << Z) - 1;
  for (std::uint32_t S = 1; S < full; ++S) {  // nonempty proper subsets
    int decodable = 0;
    for (int l = 0; l < Z; ++l) {
      bool ok = true;
      for (std::uint32_t m : masks[l]) {
        const std::uint32_t inter = m & S;
        if (inter != 0 && inter != m) {
          ok = false;
          break;
        }
      }
      decodable += ok;
    }
    const double alpha = static_cast<double>(decodable) / Z;
    if (1.0 - alpha < best.delta) {
      best.delta = 1.0 - alpha;
      best.alpha = alpha;
      best.minimizing_columns.clear();
      for (int c = 0; c < Z; ++c)
        if (S >> c & 1) best.minimizing_columns.push_back(c);
    }
  }
  return best;
}

double inference_robustness_closed_form(int columns) {
  if (columns < 2) {
    throw std::invalid_argument("inference_robustness_closed_form: Z >= 2");
  }
  if (columns % 2 == 0) return static_cast<double>(columns - 2) / columns;
  return static_cast<double>(columns - 1) / columns;
}

}  // namespace heterosag
