#include "heterosag/byzantine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heterosag/quantizer.hpp"

namespace heterosag {

bool AttackSpec::is_byzantine(int user) const {
  return std::find(byzantine_users.begin(), byzantine_users.end(), user) !=
         byzantine_users.end();
}

int max_byzantine(int group_count) {
  if (group_count < 1) throw std::invalid_argument("max_byzantine: groups >= 1");
  return (group_count + 3) / 4 - 1;  // ceil(G/4) - 1
}

std::vector<double> coordinate_median(
    const std::vector<std::vector<double>>& segments) {
  if (segments.empty()) {
    throw std::invalid_argument("coordinate_median: no segments");
  }
  const std::size_t len = segments.front().size();
  for (const auto& s : segments) {
    if (s.size() != len) {
      throw std::invalid_argument("coordinate_median: ragged segment lengths");
    }
  }
  std::vector<double> out(len);
  std::vector<double> column(segments.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t k = 0; k < segments.size(); ++k) column[k] = segments[k][i];
    const std::size_t mid = column.size() / 2;
    std::nth_element(column.begin(), column.begin() + mid, column.end());
    if (column.size() % 2 == 1) {
      out[i] = column[mid];
    } else {
      const double hi = column[mid];
      const double lo = *std::max_element(column.begin(), column.begin() + mid);
      out[i] = 0.5 * (lo + hi);
    }
  }
  return out;
}

void inject_attack(std::vector<double>& update, const AttackSpec& spec,
                   std::mt19937_64& rng) {
  switch (spec.kind) {
    case AttackKind::none:
      return;
    case AttackKind::gaussian: {
      // Box-Muller; keeps the stream implementation-independent.
      for (std::size_t i = 0; i < update.size(); i += 2) {
        const double u1 = std::max(uniform01(rng), 1e-300);
        const double u2 = uniform01(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        update[i] = spec.sigma * r * std::cos(2.0 * M_PI * u2);
        if (i + 1 < update.size()) {
          update[i + 1] = spec.sigma * r * std::sin(2.0 * M_PI * u2);
        }
      }
      return;
    }
    case AttackKind::sign_flip:
      for (double& v : update) v *= spec.multiplier;
      return;
    case AttackKind::label_flip:
      // The shift itself lives in the data layer; this is the final scale.
      for (double& v : update) v *= spec.label_multiplier;
      return;
  }
  throw std::invalid_argument("inject_attack: unknown attack kind");
}

}  // namespace heterosag
