// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_SCHEDULER_HPP
#define IRS_SCHEDULER_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "irs/clustering.hpp"
#include "irs/core.hpp"

namespace irs {

struct Slot {
  std::size_t ue = 0;
  std::size_t centroid = 0;
  bool operator==(const Slot&) const = default;
};

/// One TDMA frame: K slots, each centroid served in one contiguous block.
struct FrameSchedule {
  std::vector<Slot> slots;
  std::size_t reconfiguration_count = 0;
};

enum class SlotOrder { AscendingUeId };

FrameSchedule build_frame(const ClusterAssignment& assignment, SlotOrder order = SlotOrder::AscendingUeId);

struct MetricsReport {
  std::vector<Real> per_ue_rate;      // bit/s/Hz, pooled over realizations after aggregate()
  Real sum_capacity = 0;              // bit/frame, B * sum(per_ue_rate)
  Real avg_sum_capacity = 0;          // bit/slot
  Real percentile_capacity = 0;       // bit/slot, (B/K) * q-quantile of per-UE rates
  Real percentile_q = 0.95;
  std::size_t num_ues = 0;            // K of one frame
  Real bandwidth_hz = 0;
  std::size_t realizations = 1;
  Real mean_effective_z = 0;
};

/// inf{x : empirical CDF(x) >= q} of a non-empty sample.
Real empirical_quantile(std::span<const Real> sample, Real q);

MetricsReport evaluate(const ClusterAssignment& assignment, const UeProfile& profiles,
                       const RadioParams& radio, Real q = 0.95);

/// C-bar averaged over realizations; percentile over the pooled per-UE rates.
MetricsReport aggregate(std::span<const MetricsReport> reports);

struct ZMinResult {
  std::size_t z_min = 0;
  bool reached = false;          // false: target missed even at Z = K, z_min reported as K
  Real target_capacity = 0;      // bit/slot
  std::vector<std::pair<std::size_t, Real>> scanned;  // (Z, C-bar) in scan order
};

/// Smallest Z whose aggregated C-bar reaches target_fraction of the unclustered C-bar.
/// Scans Z = 1, 2, ... upward; heuristic C-bar(Z) is not monotone, so no bisection.
ZMinResult find_z_min(std::span<const UeProfile> profiles, const ClusteringSettings& algorithm,
                      Real target_fraction, const RadioParams& radio);

}  // namespace irs

#endif  // IRS_SCHEDULER_HPP
