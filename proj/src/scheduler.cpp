// SPDX-License-Identifier: Apache-2.0
#include "irs/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "irs/errors.hpp"

namespace irs {

FrameSchedule build_frame(const ClusterAssignment& assignment, SlotOrder /*order*/) {
  assignment.validate(assignment.num_ues());
  FrameSchedule frame;
  frame.slots.reserve(assignment.num_ues());
  const auto groups = assignment.groups();
  for (std::size_t z = 0; z < groups.size(); ++z)
    for (auto ue : groups[z]) frame.slots.push_back(Slot{ue, z});
  frame.reconfiguration_count = groups.size();
  return frame;
}

Real empirical_quantile(std::span<const Real> sample, Real q) {
  detail::require(!sample.empty(), "empirical_quantile: empty sample");
  detail::require(q > 0 && q < 1, "empirical_quantile: q must lie in (0, 1)");
  std::vector<Real> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  // Smallest 1-based rank i with i/n >= q; the slack absorbs q*n landing a hair above an integer.
  const auto n = static_cast<Real>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

MetricsReport evaluate(const ClusterAssignment& assignment, const UeProfile& profiles,
                       const RadioParams& radio, Real q) {
  const std::size_t k = profiles.num_ues();
  assignment.validate(k);
  MetricsReport r;
  r.per_ue_rate.resize(k);
  for (std::size_t u = 0; u < k; ++u)
    r.per_ue_rate[u] = profiles.rate_under(u, assignment.centroids[assignment.membership[u]], radio);
  r.sum_capacity = frame_sum_capacity(assignment, r.per_ue_rate, radio);
  r.avg_sum_capacity = r.sum_capacity / static_cast<Real>(k);
  r.percentile_q = q;
  r.percentile_capacity = radio.bandwidth_hz / static_cast<Real>(k) * empirical_quantile(r.per_ue_rate, q);
  r.num_ues = k;
  r.bandwidth_hz = radio.bandwidth_hz;
  r.mean_effective_z = static_cast<Real>(assignment.effective_z());
  return r;
}

MetricsReport aggregate(std::span<const MetricsReport> reports) {
  detail::require(!reports.empty(), "aggregate: no reports");
  if (reports.size() == 1) return reports.front();

  const MetricsReport& first = reports.front();
  MetricsReport out;
  out.percentile_q = first.percentile_q;
  out.num_ues = first.num_ues;
  out.realizations = 0;
  out.bandwidth_hz = first.bandwidth_hz;
  for (const auto& r : reports) {
    detail::require(r.percentile_q == first.percentile_q && r.num_ues == first.num_ues &&
                        r.bandwidth_hz == first.bandwidth_hz,
                    "aggregate: reports disagree on q, K or bandwidth");
    out.per_ue_rate.insert(out.per_ue_rate.end(), r.per_ue_rate.begin(), r.per_ue_rate.end());
    out.sum_capacity += r.sum_capacity;
    out.avg_sum_capacity += r.avg_sum_capacity;
    out.mean_effective_z += r.mean_effective_z * static_cast<Real>(r.realizations);
    out.realizations += r.realizations;
  }
  const auto n = static_cast<Real>(reports.size());
  out.avg_sum_capacity /= n;
  out.mean_effective_z /= static_cast<Real>(out.realizations);
  out.percentile_capacity =
      out.bandwidth_hz / static_cast<Real>(out.num_ues) * empirical_quantile(out.per_ue_rate, out.percentile_q);
  return out;
}

ZMinResult find_z_min(std::span<const UeProfile> profiles, const ClusteringSettings& algorithm,
                      Real target_fraction, const RadioParams& radio) {
  detail::require(!profiles.empty(), "find_z_min: no realizations");
  detail::require(target_fraction > 0 && target_fraction <= 1, "find_z_min: target fraction must lie in (0, 1]");
  const std::size_t k = profiles.front().num_ues();

  auto mean_capacity = [&](auto&& assign) {
    Real total = 0;
    for (const auto& p : profiles) total += evaluate(assign(p), p, radio).avg_sum_capacity;
    return total / static_cast<Real>(profiles.size());
  };

  ZMinResult out;
  out.target_capacity = target_fraction * mean_capacity([](const UeProfile& p) { return unclustered(p); });
  for (std::size_t z = 1; z <= k; ++z) {
    ClusteringSettings s = algorithm;
    s.z_max = z;
    const Real c = mean_capacity([&](const UeProfile& p) { return cluster(p, s, radio); });
    out.scanned.emplace_back(z, c);
    if (c >= out.target_capacity) {
      out.z_min = z;
      out.reached = true;
      return out;
    }
  }
  std::cerr << "warning: find_z_min: target " << target_fraction
            << " of the unclustered capacity not reached even at Z = K\n";
  out.z_min = k;
  return out;
}

}  // namespace irs
