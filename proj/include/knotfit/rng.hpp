#pragma once

#include <cstdint>
#include <random>

namespace knotfit {

// Seeded uniform doubles. The raw 64-bit stream is mapped manually because
// std::uniform_real_distribution is not bit-reproducible across standard
// library implementations, and seeds must give identical runs everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0,1)
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace knotfit
