#include "heterosag/quantizer.hpp"

#include <algorithm>
#include <cmath>

namespace heterosag {

int quantize(double x, const QuantizerSpec& spec, std::mt19937_64& rng) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("quantize: non-finite input");
  }
  x = std::clamp(x, spec.r1, spec.r2);
  const double pos = (x - spec.r1) / spec.delta();
  // Grid points quantize deterministically; the snap also absorbs the
  // rounding slack of (T(l) - r1) / delta.
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) < 1e-9) {
    return std::clamp(static_cast<int>(nearest), 0, spec.levels - 1);
  }
  int lo = std::min(static_cast<int>(std::floor(pos)), spec.levels - 2);
  const double p_up = pos - lo;
  if (p_up >= 1.0) return lo + 1;
  if (p_up <= 0.0) return lo;
  return lo + (uniform01(rng) < p_up ? 1 : 0);
}

double dequantize_level(int level, const QuantizerSpec& spec) {
  if (level < 0 || level >= spec.levels) {
    throw std::out_of_range("dequantize_level: level outside [0, K-1]");
  }
  return spec.grid(level);
}

double dequantize_aggregate(std::uint64_t v, int survivor_count,
                            const QuantizerSpec& spec) {
  const auto vmax = static_cast<std::uint64_t>(survivor_count) *
                    static_cast<std::uint64_t>(spec.levels - 1);
  if (v > vmax) {
    throw std::out_of_range(
        "dequantize_aggregate: value exceeds |U|(K-1); decode is corrupt");
  }
  return survivor_count * spec.r1 + static_cast<double>(v) * spec.delta();
}

}  // namespace heterosag
