#include "heterosag/prg.hpp"

#include <stdexcept>

namespace heterosag {

std::vector<std::uint64_t> prg_expand(Seed seed, std::size_t length,
                                      RingModulus modulus) {
  if (length == 0) {
    throw std::invalid_argument("prg_expand: length must be >= 1");
  }
  CounterPrg prg(seed);
  std::vector<std::uint64_t> out(length);
  for (auto& v : out) v = prg.next_below(modulus.value);
  return out;
}

}  // namespace heterosag
