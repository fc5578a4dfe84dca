// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_SEED_HPP
#define IRS_SEED_HPP

#include <cstdint>

namespace irs {

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Independent stream seed for sub-task `index` of `master`.
/// Realization i of a sweep uses derive_seed(master_seed, i).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace irs

#endif  // IRS_SEED_HPP
