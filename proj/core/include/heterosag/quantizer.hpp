#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace heterosag {

/// Element-wise stochastic K-level quantizer over [r1, r2].
/// Grid points T(l) = r1 + l * delta for l in [0, K-1].
struct QuantizerSpec {
  int levels;  // K >= 2
  double r1;
  double r2;

  QuantizerSpec(int k, double lo, double hi) : levels(k), r1(lo), r2(hi) {
    if (k < 2) throw std::invalid_argument("QuantizerSpec: K must be >= 2");
    if (!(lo < hi)) throw std::invalid_argument("QuantizerSpec: need r1 < r2");
  }

  double delta() const { return (r2 - r1) / (levels - 1); }
  double grid(int l) const { return r1 + l * delta(); }
};

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Stochastic rounding to the integer level index in [0, K-1].
/// Rounds up with probability (x - T(l)) / delta. Inputs are clipped into
/// [r1, r2] first; values on a grid point quantize deterministically.
int quantize(double x, const QuantizerSpec& spec, std::mt19937_64& rng);

/// T(l), the real value of level l.
double dequantize_level(int level, const QuantizerSpec& spec);

/// Maps an aggregated integer v = sum of |U| levels back to the reals:
/// |U| * r1 + v * delta. v outside [0, |U|(K-1)] signals a decode bug.
double dequantize_aggregate(std::uint64_t v, int survivor_count,
                            const QuantizerSpec& spec);

}  // namespace heterosag
