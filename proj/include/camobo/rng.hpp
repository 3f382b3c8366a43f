#pragma once

#include <cstdint>
#include <random>

namespace camobo {

using Rng = std::mt19937_64;

/// Independent random streams derived from one run seed. Each consumer of
/// randomness in a run draws from its own stream so that enabling or
/// disabling one component never shifts the draws of another.
enum class Stream : std::uint32_t {
  kInitialDesign = 1,
  kCostWeights = 2,
  kTheta = 3,
  kAcquisition = 4,
  kHyperparameters = 5,
};

inline Rng make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

}  // namespace camobo
