// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_HARNESS_CACHE_HPP
#define IRS_HARNESS_CACHE_HPP

// On-disk cache of per-UE optima. One file per (realization, scenario),
// named by a 64-bit FNV-1a hash of a canonical description of everything the
// optima depend on. The description is also stored inside the file and
// compared on load, so a hash collision reads as a miss.
//
// Files hold raw host-endian doubles: loaded optima are bit-identical to the
// ones that were stored. Writes go to a temporary file that is then renamed.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irs/channel.hpp"
#include "irs/optimizer.hpp"

namespace irs::harness {

inline constexpr const char* kCacheDirEnv = "IRS_SCHED_CACHE_DIR";

std::uint64_t fnv1a64(std::string_view bytes);

/// Canonical text for the cache key. Doubles are written in hex-float form.
struct ProfileKey {
  std::uint64_t geometry_seed = 0;
  std::uint64_t channel_seed = 0;
  std::size_t num_ues = 0;
  Real cell_radius_m = 0;
  Point2 gnb_position_m = Point2::Zero();
  Point2 irs_position_m = Point2::Zero();
  ChannelScenario scenario;
  int phase_bits = 0;
  OptimizerSettings optimizer;
  Real tx_power_dbm = 0;
  Real noise_psd_dbm_per_hz = 0;
  Real bandwidth_hz = 0;

  std::string description() const;
  std::string file_stem() const;  // 16 hex digits
};

class ProfileCache {
 public:
  ProfileCache() = default;  // disabled
  explicit ProfileCache(std::filesystem::path dir);

  /// IRS_SCHED_CACHE_DIR wins over `configured`; both empty means disabled.
  static ProfileCache resolve(const std::string& configured);

  bool enabled() const { return !dir_.empty(); }
  const std::filesystem::path& directory() const { return dir_; }
  std::filesystem::path file_for(const ProfileKey& key) const;

  /// nullopt on a miss, a foreign description or a truncated file.
  std::optional<std::vector<PerUeOptimum>> load(const ProfileKey& key) const;
  void store(const ProfileKey& key, const std::vector<PerUeOptimum>& optima) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace irs::harness

#endif  // IRS_HARNESS_CACHE_HPP
