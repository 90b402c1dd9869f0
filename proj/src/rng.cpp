#include "cdsim/rng.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace cdsim {

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::uniform: bound must be nonzero");
  if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
  const int shift = std::countl_zero(bound - 1);
  const std::uint64_t mask = ~std::uint64_t{0} >> shift;
  std::uint64_t v;
  do {
    v = next_u64() & mask;
  } while (v >= bound);
  return v;
}

BitString Rng::bits(std::size_t count) {
  BitString out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = bit();
  return out;
}

Bytes Rng::bytes(std::size_t count) {
  Bytes out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = static_cast<std::uint8_t>(next_u64() & 0xffu);
  return out;
}

double Rng::real01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::vector<std::uint32_t> Rng::permutation(std::uint32_t n) {
  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  for (std::uint32_t i = n; i > 1; --i) {
    const auto j = static_cast<std::uint32_t>(uniform(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

std::vector<std::uint32_t> Rng::subset(std::uint32_t n, std::uint32_t k) {
  if (k > n) throw std::invalid_argument("Rng::subset: k > n");
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
  for (std::uint32_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::uint32_t>(uniform(n - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::uint32_t> out(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace cdsim
