// SPDX-License-Identifier: Apache-2.0
#include "irs/harness/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "irs/errors.hpp"
#include "irs/harness/config.hpp"
#include "irs/scheduler.hpp"
#include "irs/seed.hpp"

namespace irs::harness {

namespace {

RadioParams oracle_radio(std::optional<Real> tx_dbm, const AntennaArray& gnb, Eigen::Index n_irs) {
  return RadioParams::from_dbm(100e6, tx_dbm.value_or(desk_tx_power_dbm(gnb.size(), n_irs)), -174.0);
}

ChannelRealization instance(std::uint64_t seed, std::size_t k, const ChannelScenario& scenario) {
  const ScenarioGeometry geom = sample_geometry(derive_seed(seed, 1), k, 167.0, Point2(0, 0), Point2(75, 100));
  return synthesize_channel(derive_seed(seed, 2), geom, scenario);
}

}  // namespace

Real median(std::vector<Real> v) {
  detail::require(!v.empty(), "median: empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ExhaustiveOptimum exhaustive_config(const CMatrix& g_k, const CMatrix& h, const PhaseSet& set,
                                    const RadioParams& radio) {
  detail::require(!set.is_continuous(), "exhaustive_config: needs a quantized phase set");
  const auto n = static_cast<std::size_t>(h.rows());
  detail::require(n >= 1 && n <= kMaxOracleIrs,
                  "exhaustive_config: N_I = " + std::to_string(n) + " outside [1, " + std::to_string(kMaxOracleIrs) + "]");
  const std::size_t levels = set.levels();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= levels;
    detail::require(total <= kMaxOracleConfigs, "exhaustive_config: (2^b)^N_I exceeds " +
                                                    std::to_string(kMaxOracleConfigs) + " candidates");
  }

  ExhaustiveOptimum best;
  best.rate = -1;
  best.candidates = total;
  std::vector<std::size_t> digit(n, 0);
  RVector theta(static_cast<Eigen::Index>(n));
  for (std::size_t m = 0; m < total; ++m) {
    for (std::size_t i = 0, rest = m; i < n; ++i, rest /= levels) digit[n - 1 - i] = rest % levels;
    for (std::size_t i = 0; i < n; ++i) theta(static_cast<Eigen::Index>(i)) = set.grid_value(digit[i]);
    IrsConfiguration c{PhaseVector(theta)};
    const Real r = config_rate(g_k, h, c, radio);
    if (r > best.rate) {
      best.rate = r;
      best.config = std::move(c);
    }
  }
  return best;
}

OracleConfigReport run_oracle_config(const OracleConfigSpec& spec) {
  detail::require(spec.bits >= 1, "oracle-config: needs b >= 1 (exhaustive search is over a grid)");
  detail::require(spec.num_irs >= 1 && spec.num_irs <= kMaxOracleIrs,
                  "oracle-config: N_I must lie in [1, " + std::to_string(kMaxOracleIrs) + "]");
  detail::require(spec.bits * spec.num_irs <= 12, "oracle-config: 2^(b N_I) exceeds " +
                                                      std::to_string(kMaxOracleConfigs) + " configurations");
  detail::require(spec.seeds >= 1, "oracle-config: need at least one seed");

  ChannelScenario scenario;
  scenario.gnb = spec.gnb;
  scenario.irs = AntennaArray{1, static_cast<int>(spec.num_irs)};
  scenario.ue = spec.ue;
  scenario.mode = spec.mode;
  const RadioParams radio = oracle_radio(spec.tx_power_dbm, spec.gnb, scenario.irs.size());
  const PhaseSet set = PhaseSet::quantized(spec.bits);

  OracleConfigReport rep;
  for (std::size_t s = 0; s < spec.seeds; ++s) {
    const ChannelRealization ch = instance(derive_seed(spec.master_seed, s), 1, scenario);
    const Real alg1 = optimize_ue(ch.g[0], ch.h, set, spec.optimizer, radio).achievable_rate;
    const Real best = exhaustive_config(ch.g[0], ch.h, set, radio).rate;
    rep.alg1_rate.push_back(alg1);
    rep.exhaustive_rate.push_back(best);
    rep.ratio.push_back(best > 0 ? alg1 / best : 1.0);
  }
  rep.min_ratio = *std::min_element(rep.ratio.begin(), rep.ratio.end());
  rep.median_ratio = median(rep.ratio);
  return rep;
}

PartitionOptimum exhaustive_partition(const UeProfile& pr, std::size_t z, const RadioParams& radio) {
  const std::size_t k = pr.num_ues();
  detail::require(k >= 1 && k <= kMaxOracleUes,
                  "exhaustive_partition: K = " + std::to_string(k) + " outside [1, " + std::to_string(kMaxOracleUes) + "]");
  detail::require(z >= 1 && z <= kMaxOracleZ,
                  "exhaustive_partition: Z = " + std::to_string(z) + " outside [1, " + std::to_string(kMaxOracleZ) + "]");

  PartitionOptimum best;
  best.sum_capacity = -1;

  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]), blocks < z.
  std::vector<std::size_t> a(k, 0);
  while (true) {
    const std::size_t blocks = *std::max_element(a.begin(), a.end()) + 1;
    std::vector<std::vector<PhaseVector>> members(blocks);
    std::vector<std::vector<Real>> weights(blocks);
    for (std::size_t u = 0; u < k; ++u) {
      members[a[u]].push_back(pr.optimal_phases(u));
      weights[a[u]].push_back(pr.optimal_rate(u));
    }
    ClusterAssignment cand;
    cand.membership = a;
    for (std::size_t b = 0; b < blocks; ++b) {
      const Real total = std::accumulate(weights[b].begin(), weights[b].end(), 0.0);
      const PhaseVector mean = total > 0 ? circular_mean(members[b], weights[b]) : circular_mean(members[b]);
      cand.centroids.push_back(IrsConfiguration{mean.quantized(pr.phase_set)});
    }
    std::vector<Real> rates(k);
    for (std::size_t u = 0; u < k; ++u) rates[u] = pr.rate_under(u, cand.centroids[a[u]], radio);
    const Real cap = frame_sum_capacity(cand, rates, radio);
    ++best.partitions;
    if (cap > best.sum_capacity) {
      best.sum_capacity = cap;
      best.assignment = std::move(cand);
    }

    // Next string in lexicographic order: bump the rightmost position that can grow.
    std::size_t i = k;
    while (--i >= 1) {
      const std::size_t prefix_max = *std::max_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i));
      if (a[i] <= prefix_max && a[i] + 1 < z) break;
    }
    if (i == 0) break;
    ++a[i];
    std::fill(a.begin() + static_cast<std::ptrdiff_t>(i) + 1, a.end(), 0);
  }
  return best;
}

OraclePartitionReport run_oracle_partition(const OraclePartitionSpec& spec) {
  detail::require(spec.num_ues >= 1 && spec.num_ues <= kMaxOracleUes,
                  "oracle-partition: K must lie in [1, " + std::to_string(kMaxOracleUes) + "]");
  detail::require(spec.z >= 1 && spec.z <= kMaxOracleZ && spec.z <= spec.num_ues,
                  "oracle-partition: Z must lie in [1, min(K, " + std::to_string(kMaxOracleZ) + ")]");
  detail::require(spec.seeds >= 1, "oracle-partition: need at least one seed");
  detail::require(!spec.algorithms.empty(), "oracle-partition: no algorithms");

  ChannelScenario scenario;
  scenario.gnb = spec.gnb;
  scenario.irs = spec.irs;
  scenario.ue = spec.ue;
  scenario.mode = spec.mode;
  const RadioParams radio = oracle_radio(spec.tx_power_dbm, spec.gnb, spec.irs.size());
  const PhaseSet set = spec.bits == 0 ? PhaseSet::continuous() : PhaseSet::quantized(spec.bits);

  OraclePartitionReport rep;
  for (std::size_t s = 0; s < spec.seeds; ++s) {
    const std::uint64_t seed = derive_seed(spec.master_seed, s);
    auto ch = std::make_shared<const ChannelRealization>(instance(seed, spec.num_ues, scenario));
    const UeProfile prof = build_profile(ch, set, OptimizerSettings{}, radio);
    const Real opt = exhaustive_partition(prof, spec.z, radio).sum_capacity;
    rep.optimum_capacity.push_back(opt);
    for (Algorithm a : spec.algorithms) {
      ClusteringSettings cs;
      cs.algorithm = a;
      cs.z_max = spec.z;
      cs.seed = derive_seed(seed, 3);
      const Real cap = evaluate(cluster(prof, cs, radio), prof, radio).sum_capacity;
      rep.ratio[a].push_back(opt > 0 ? cap / opt : 1.0);
    }
  }
  for (const auto& [a, r] : rep.ratio) rep.median_ratio[a] = median(r);
  return rep;
}

}  // namespace irs::harness
