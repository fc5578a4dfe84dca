// SPDX-License-Identifier: Apache-2.0
#include "irs/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "irs/errors.hpp"

namespace irs {

namespace {

using Membership = std::vector<std::size_t>;

struct Partition {
  Membership membership;
  std::vector<PhaseVector> centroids;
};

/// Drop groups nobody belongs to; surviving groups keep their relative order.
void drop_empty(Partition& p) {
  std::vector<std::size_t> count(p.centroids.size(), 0);
  for (auto z : p.membership) ++count[z];
  std::vector<std::size_t> remap(p.centroids.size());
  std::vector<PhaseVector> kept;
  for (std::size_t z = 0; z < p.centroids.size(); ++z) {
    remap[z] = kept.size();
    if (count[z] > 0) kept.push_back(std::move(p.centroids[z]));
  }
  for (auto& z : p.membership) z = remap[z];
  p.centroids = std::move(kept);
}

/// Groups with bit-identical centroids share one IRS configuration; fold them together.
ClusterAssignment finalize(Partition p) {
  drop_empty(p);
  for (std::size_t j = 1; j < p.centroids.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (p.centroids[i] == p.centroids[j]) {
        for (auto& z : p.membership)
          if (z == j) z = i;
        break;
      }
  drop_empty(p);

  ClusterAssignment out;
  out.membership = std::move(p.membership);
  out.centroids.reserve(p.centroids.size());
  for (auto& c : p.centroids) out.centroids.push_back(IrsConfiguration{std::move(c)});
  return out;
}

std::size_t nearest(const PhaseVector& x, const std::vector<PhaseVector>& centroids) {
  std::size_t best = 0;
  Real best_d = std::numeric_limits<Real>::infinity();
  for (std::size_t z = 0; z < centroids.size(); ++z) {
    const Real d = circular_distance(x, centroids[z]);
    if (d < best_d) {
      best_d = d;
      best = z;
    }
  }
  return best;
}

Real partition_cost(const UeProfile& pr, const Partition& p) {
  Real c = 0;
  for (std::size_t k = 0; k < p.membership.size(); ++k)
    c += circular_distance(pr.optimal_phases(k), p.centroids[p.membership[k]]);
  return c;
}

std::vector<std::size_t> shuffled(std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

/// UE ids ordered by individually optimal rate; ties keep the lower id first.
std::vector<std::size_t> rank_by_rate(const UeProfile& pr, bool descending) {
  std::vector<std::size_t> idx(pr.num_ues());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return descending ? pr.optimal_rate(a) > pr.optimal_rate(b) : pr.optimal_rate(a) < pr.optimal_rate(b);
  });
  return idx;
}

/// The first z UEs of `order` whose optima differ bit for bit. UEs sharing an
/// optimum would otherwise seed identical centroids that merge right away.
std::vector<std::size_t> distinct_leaders(const UeProfile& pr, const std::vector<std::size_t>& order, std::size_t z) {
  std::vector<std::size_t> out;
  for (std::size_t u : order) {
    if (out.size() == z) break;
    bool repeat = false;
    for (std::size_t l : out) repeat = repeat || pr.optimal_phases(l) == pr.optimal_phases(u);
    if (!repeat) out.push_back(u);
  }
  return out;
}

std::vector<PhaseVector> group_means(const UeProfile& pr, const Partition& p) {
  std::vector<std::vector<PhaseVector>> members(p.centroids.size());
  for (std::size_t k = 0; k < p.membership.size(); ++k)
    members[p.membership[k]].push_back(pr.optimal_phases(k));
  std::vector<PhaseVector> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(circular_mean(m).quantized(pr.phase_set));
  return out;
}

void check_inputs(const UeProfile& pr, const ClusteringSettings& s) {
  detail::require(pr.num_ues() >= 1, "clustering: no UEs");
  s.validate(pr.num_ues());
}

enum class Weighting { Rate, InverseRate };

ClusterAssignment capacity_weighted(const UeProfile& pr, const ClusteringSettings& s,
                                    const RadioParams& radio, bool best_first, Weighting weighting,
                                    ClusteringTrace* trace) {
  check_inputs(pr, s);
  const std::size_t k = pr.num_ues();
  if (s.z_max == k) return unclustered(pr);

  std::vector<PhaseVector> centroids;
  for (std::size_t u : distinct_leaders(pr, rank_by_rate(pr, best_first), s.z_max))
    centroids.push_back(pr.optimal_phases(u));

  Partition best;
  Real best_score = -std::numeric_limits<Real>::infinity();
  Real previous = 0;
  int it = 0;
  // The update is a deterministic function of the centroid set, so a repeated
  // set means the iteration has entered a cycle and can only revisit scores.
  std::vector<std::vector<PhaseVector>> visited;

  for (; it < s.cwc_max_iterations; ++it) {
    if (std::find(visited.begin(), visited.end(), centroids) != visited.end()) break;
    visited.push_back(centroids);
    const std::size_t nz = centroids.size();
    std::vector<IrsConfiguration> configs;
    configs.reserve(nz);
    for (const auto& c : centroids) configs.push_back(IrsConfiguration{c});

    // Rate of every UE under every current centroid; the assignment and the
    // update below both read this table.
    Eigen::MatrixXd rates(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(nz));
    for (std::size_t u = 0; u < k; ++u)
      for (std::size_t z = 0; z < nz; ++z)
        rates(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(z)) = pr.rate_under(u, configs[z], radio);

    Partition p{Membership(k, 0), centroids};
    Real score = 0;
    for (std::size_t u = 0; u < k; ++u) {
      Real best_gap = std::numeric_limits<Real>::infinity();
      for (std::size_t z = 0; z < nz; ++z) {
        const Real gap = pr.optimal_rate(u) - rates(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(z));
        if (gap < best_gap) {
          best_gap = gap;
          p.membership[u] = z;
        }
      }
      score += rates(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(p.membership[u]));
    }
    if (trace) trace->objective.push_back(score);
    if (score > best_score) {
      best_score = score;
      best = p;
    }
    if (it > 0 && std::abs(score - previous) < s.mu) {
      ++it;
      break;
    }
    previous = score;

    std::vector<std::vector<PhaseVector>> members(nz);
    std::vector<std::vector<Real>> weights(nz);
    for (std::size_t u = 0; u < k; ++u) {
      const std::size_t z = p.membership[u];
      const Real r = rates(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(z));
      members[z].push_back(pr.optimal_phases(u));
      weights[z].push_back(weighting == Weighting::Rate ? r : 1.0 / std::max(r, 1e-12));
    }
    std::vector<PhaseVector> next;
    for (std::size_t z = 0; z < nz; ++z) {
      if (members[z].empty()) continue;
      const Real total = std::accumulate(weights[z].begin(), weights[z].end(), 0.0);
      const PhaseVector mean = total > 0 ? circular_mean(members[z], weights[z]) : circular_mean(members[z]);
      next.push_back(mean.quantized(pr.phase_set));
    }
    centroids = std::move(next);
  }
  if (trace) trace->iterations = it;
  return finalize(std::move(best));
}

}  // namespace

Real UeProfile::rate_under(std::size_t k, const IrsConfiguration& config, const RadioParams& radio) const {
  return config_rate(channels->g[k], channels->h, config, radio);
}

UeProfile build_profile(std::shared_ptr<const ChannelRealization> channels, const PhaseSet& set,
                        const OptimizerSettings& settings, const RadioParams& radio) {
  UeProfile p;
  p.phase_set = set;
  p.optima.reserve(channels->num_ues());
  for (std::size_t k = 0; k < channels->num_ues(); ++k)
    p.optima.push_back(optimize_ue(channels->g[k], channels->h, set, settings, radio));
  p.channels = std::move(channels);
  return p;
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::KM: return "KM";
    case Algorithm::HC: return "HC";
    case Algorithm::KMed: return "KMed";
    case Algorithm::CWC: return "CWC";
    case Algorithm::OSCBC: return "OSCBC";
    case Algorithm::ICWC: return "ICWC";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  for (Algorithm a : kAllAlgorithms)
    if (to_string(a) == text) return a;
  throw ContractViolation("unknown clustering algorithm '" + std::string(text) +
                          "' (expected KM, HC, KMed, CWC, OSCBC or ICWC)");
}

void ClusteringSettings::validate(std::size_t k) const {
  detail::require(z_max >= 1 && z_max <= k, "ClusteringSettings: z_max must lie in [1, K]");
  detail::require(mu > 0, "ClusteringSettings: mu must be positive");
  detail::require(km_max_iterations >= 1 && cwc_max_iterations >= 1,
                  "ClusteringSettings: iteration caps must be at least 1");
}

PhaseVector circular_mean(std::span<const PhaseVector> points, std::span<const Real> weights) {
  detail::require(!points.empty(), "circular_mean: no points");
  detail::require(points.size() == weights.size(), "circular_mean: one weight per point required");
  const Eigen::Index n = points.front().size();
  Real total = 0;
  for (Real w : weights) {
    detail::require(w >= 0 && std::isfinite(w), "circular_mean: weights must be finite and nonnegative");
    total += w;
  }
  detail::require(total > 0, "circular_mean: weights sum to zero");

  CVector resultant = CVector::Zero(n);
  for (std::size_t i = 0; i < points.size(); ++i) {
    detail::require(points[i].size() == n, "circular_mean: length mismatch");
    if (weights[i] == 0) continue;
    for (Eigen::Index e = 0; e < n; ++e) resultant(e) += std::polar(weights[i], points[i][e]);
  }
  RVector theta(n);
  for (Eigen::Index e = 0; e < n; ++e)
    theta(e) = std::abs(resultant(e)) <= 1e-12 * total ? 0.0 : std::arg(resultant(e));
  return PhaseVector(std::move(theta));
}

PhaseVector circular_mean(std::span<const PhaseVector> points) {
  const std::vector<Real> ones(points.size(), 1.0);
  return circular_mean(points, ones);
}

Real within_cluster_distance(const UeProfile& profiles, const ClusterAssignment& assignment) {
  Real c = 0;
  for (std::size_t k = 0; k < assignment.membership.size(); ++k)
    c += circular_distance(profiles.optimal_phases(k), assignment.centroids[assignment.membership[k]].phases);
  return c;
}

ClusterAssignment unclustered(const UeProfile& profiles) {
  ClusterAssignment a;
  a.membership.resize(profiles.num_ues());
  std::iota(a.membership.begin(), a.membership.end(), 0);
  for (const auto& o : profiles.optima) a.centroids.push_back(o.config);
  return a;
}

ClusterAssignment cluster_km(const UeProfile& pr, const ClusteringSettings& s, ClusteringTrace* trace) {
  check_inputs(pr, s);
  const std::size_t k = pr.num_ues();
  if (s.z_max == k) return unclustered(pr);

  std::vector<PhaseVector> seeds;
  for (auto i : distinct_leaders(pr, shuffled(k, s.seed), s.z_max)) seeds.push_back(pr.optimal_phases(i));

  auto assign = [&](const std::vector<PhaseVector>& centroids) {
    Partition p{Membership(k), centroids};
    for (std::size_t u = 0; u < k; ++u) p.membership[u] = nearest(pr.optimal_phases(u), centroids);
    drop_empty(p);
    p.centroids = group_means(pr, p);
    return p;
  };

  // Each state pairs an assignment with the (projected) means of its groups.
  // A state is accepted only if it does not raise the total circular distance.
  Partition state = assign(seeds);
  Real cost = partition_cost(pr, state);
  if (trace) trace->objective.push_back(cost);
  int it = 1;
  for (; it < s.km_max_iterations; ++it) {
    Partition next = assign(state.centroids);
    if (next.membership == state.membership) break;
    const Real next_cost = partition_cost(pr, next);
    if (next_cost > cost) break;
    state = std::move(next);
    cost = next_cost;
    if (trace) trace->objective.push_back(cost);
  }
  if (trace) trace->iterations = it;
  return finalize(std::move(state));
}

ClusterAssignment cluster_hc(const UeProfile& pr, const ClusteringSettings& s) {
  check_inputs(pr, s);
  const std::size_t k = pr.num_ues();
  if (s.z_max == k) return unclustered(pr);

  // Average-linkage distances between live clusters, updated Lance-Williams style.
  Eigen::MatrixXd dist(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          circular_distance(pr.optimal_phases(i), pr.optimal_phases(j));

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < k; ++i) members[i] = {i};
  std::vector<bool> alive(k, true);
  std::size_t live = k;

  while (live > s.z_max) {
    std::size_t a = 0, b = 0;
    Real best = std::numeric_limits<Real>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < k; ++j) {
        if (!alive[j]) continue;
        const Real d = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (d < best) {
          best = d;
          a = i;
          b = j;
        }
      }
    }
    const Real na = static_cast<Real>(members[a].size());
    const Real nb = static_cast<Real>(members[b].size());
    for (std::size_t c = 0; c < k; ++c) {
      if (!alive[c] || c == a || c == b) continue;
      const auto ec = static_cast<Eigen::Index>(c);
      const Real d = (na * dist(static_cast<Eigen::Index>(a), ec) + nb * dist(static_cast<Eigen::Index>(b), ec)) /
                     (na + nb);
      dist(static_cast<Eigen::Index>(a), ec) = d;
      dist(ec, static_cast<Eigen::Index>(a)) = d;
    }
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();
    alive[b] = false;
    --live;
  }

  Partition p{Membership(k), {}};
  for (std::size_t i = 0; i < k; ++i) {
    if (!alive[i]) continue;
    std::vector<PhaseVector> pts;
    for (auto u : members[i]) {
      p.membership[u] = p.centroids.size();
      pts.push_back(pr.optimal_phases(u));
    }
    p.centroids.push_back(circular_mean(pts).quantized(pr.phase_set));
  }
  return finalize(std::move(p));
}

ClusterAssignment cluster_kmed(const UeProfile& pr, const ClusteringSettings& s, ClusteringTrace* trace) {
  check_inputs(pr, s);
  const std::size_t k = pr.num_ues();
  if (s.z_max == k) return unclustered(pr);

  Eigen::MatrixXd dist(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          circular_distance(pr.optimal_phases(i), pr.optimal_phases(j));

  auto cost_of = [&](const std::vector<std::size_t>& medoids) {
    Real c = 0;
    for (std::size_t u = 0; u < k; ++u) {
      Real m = std::numeric_limits<Real>::infinity();
      for (auto med : medoids) m = std::min(m, dist(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(med)));
      c += m;
    }
    return c;
  };

  std::vector<std::size_t> medoids = shuffled(k, s.seed);
  medoids.resize(s.z_max);
  Real cost = cost_of(medoids);
  if (trace) trace->objective.push_back(cost);

  // Best-improvement swaps until no swap lowers the cost.
  int swaps = 0;
  const int swap_cap = 100 * static_cast<int>(k);
  while (swaps < swap_cap) {
    Real best_cost = cost;
    std::size_t best_slot = 0, best_candidate = 0;
    bool improved = false;
    for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
      for (std::size_t cand = 0; cand < k; ++cand) {
        if (std::find(medoids.begin(), medoids.end(), cand) != medoids.end()) continue;
        auto trial = medoids;
        trial[slot] = cand;
        const Real c = cost_of(trial);
        if (c < best_cost - 1e-12 * std::max<Real>(1, cost)) {
          best_cost = c;
          best_slot = slot;
          best_candidate = cand;
          improved = true;
        }
      }
    }
    if (!improved) break;
    medoids[best_slot] = best_candidate;
    cost = best_cost;
    ++swaps;
    if (trace) trace->objective.push_back(cost);
  }
  if (trace) trace->iterations = swaps;

  Partition p{Membership(k), {}};
  for (auto med : medoids) p.centroids.push_back(pr.optimal_phases(med));
  for (std::size_t u = 0; u < k; ++u) {
    std::size_t best = 0;
    Real bd = std::numeric_limits<Real>::infinity();
    for (std::size_t z = 0; z < medoids.size(); ++z) {
      const Real d = dist(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(medoids[z]));
      if (d < bd) {
        bd = d;
        best = z;
      }
    }
    p.membership[u] = best;
  }
  return finalize(std::move(p));
}

ClusterAssignment cluster_cwc(const UeProfile& pr, const ClusteringSettings& s, const RadioParams& radio,
                              ClusteringTrace* trace) {
  return capacity_weighted(pr, s, radio, /*best_first=*/true, Weighting::Rate, trace);
}

ClusterAssignment cluster_icwc(const UeProfile& pr, const ClusteringSettings& s, const RadioParams& radio,
                               ClusteringTrace* trace) {
  return capacity_weighted(pr, s, radio, /*best_first=*/false, Weighting::InverseRate, trace);
}

ClusterAssignment cluster_oscbc(const UeProfile& pr, const ClusteringSettings& s) {
  check_inputs(pr, s);
  const std::size_t k = pr.num_ues();
  if (s.z_max == k) return unclustered(pr);

  const auto leaders = distinct_leaders(pr, rank_by_rate(pr, /*descending=*/true), s.z_max);
  Partition p{Membership(k), {}};
  std::vector<bool> seeded(k, false);
  for (std::size_t z = 0; z < leaders.size(); ++z) {
    p.centroids.push_back(pr.optimal_phases(leaders[z]));
    p.membership[leaders[z]] = z;
    seeded[leaders[z]] = true;
  }
  for (std::size_t u = 0; u < k; ++u)
    if (!seeded[u]) p.membership[u] = nearest(pr.optimal_phases(u), p.centroids);
  return finalize(std::move(p));
}

ClusterAssignment cluster(const UeProfile& profiles, const ClusteringSettings& settings,
                          const RadioParams& radio, ClusteringTrace* trace) {
  switch (settings.algorithm) {
    case Algorithm::KM: return cluster_km(profiles, settings, trace);
    case Algorithm::HC: return cluster_hc(profiles, settings);
    case Algorithm::KMed: return cluster_kmed(profiles, settings, trace);
    case Algorithm::CWC: return cluster_cwc(profiles, settings, radio, trace);
    case Algorithm::OSCBC: return cluster_oscbc(profiles, settings);
    case Algorithm::ICWC: return cluster_icwc(profiles, settings, radio, trace);
  }
  throw ContractViolation("cluster: unknown algorithm");
}

}  // namespace irs
