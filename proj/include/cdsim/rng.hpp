#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cdsim/bits.hpp"

namespace cdsim {

// Seeded deterministic generator. All randomness in the library flows through
// an explicit Rng so runs are reproducible; bounded sampling uses masked
// rejection on the raw 64-bit stream rather than std::uniform_int_distribution,
// whose output is not pinned by the standard.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform value in [0, bound); bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound);

  Bit bit() { return static_cast<Bit>(next_u64() & 1u); }
  BitString bits(std::size_t count);
  Bytes bytes(std::size_t count);

  double real01();  // uniform in [0, 1) with 53-bit resolution

  // Fisher-Yates permutation of {0, ..., n-1}.
  std::vector<std::uint32_t> permutation(std::uint32_t n);
  // Sorted uniform k-subset of {0, ..., n-1}.
  std::vector<std::uint32_t> subset(std::uint32_t n, std::uint32_t k);

private:
  std::mt19937_64 gen_;
};

// splitmix64 step, used to derive independent per-trial seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace cdsim
