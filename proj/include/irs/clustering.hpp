// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_CLUSTERING_HPP
#define IRS_CLUSTERING_HPP

// Grouping of UEs in the phase-vector space. Each UE is represented by its
// individually optimal IRS configuration; every algorithm returns at most
// z_max groups plus one shared (centroid) configuration per group.
//
//   KM     Lloyd iterations, circular-distance assignment, circular-mean update
//   HC     agglomerative, average linkage
//   KMed   PAM swap search, medoids as centroids
//   CWC    rate-difference assignment, rate-weighted centroid update
//   OSCBC  CWC initialisation followed by one circular-distance association
//   ICWC   CWC with reversed initialisation and inverse-rate weights
//
// When z_max equals K every algorithm returns the singleton partition with
// each UE's own optimum as centroid.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irs/channel.hpp"
#include "irs/core.hpp"
#include "irs/optimizer.hpp"

namespace irs {

/// Per-UE optima of one channel realization, plus the channels they came from.
struct UeProfile {
  std::shared_ptr<const ChannelRealization> channels;
  std::vector<PerUeOptimum> optima;
  PhaseSet phase_set = PhaseSet::continuous();

  std::size_t num_ues() const { return optima.size(); }
  Real optimal_rate(std::size_t k) const { return optima[k].achievable_rate; }
  const PhaseVector& optimal_phases(std::size_t k) const { return optima[k].config.phases; }
  /// R_k under an arbitrary shared configuration, with freshly derived beamformers.
  Real rate_under(std::size_t k, const IrsConfiguration& config, const RadioParams& radio) const;
};

/// Run the per-UE optimiser for every UE of a realization.
UeProfile build_profile(std::shared_ptr<const ChannelRealization> channels, const PhaseSet& set,
                        const OptimizerSettings& settings, const RadioParams& radio);

enum class Algorithm { KM, HC, KMed, CWC, OSCBC, ICWC };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::KM,  Algorithm::HC,    Algorithm::KMed,
                                               Algorithm::CWC, Algorithm::OSCBC, Algorithm::ICWC};

std::string to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view text);

struct ClusteringSettings {
  Algorithm algorithm = Algorithm::CWC;
  std::size_t z_max = 1;
  Real mu = 1e-3;               // stop tolerance on the frame sum rate, CWC/ICWC
  int km_max_iterations = 50;
  int cwc_max_iterations = 100;
  std::uint64_t seed = 0;       // KM/KMed initial selection

  void validate(std::size_t k) const;
};

/// Objective values visited by an iterative algorithm.
/// KM/KMed: total within-cluster circular distance of each accepted state.
/// CWC/ICWC: frame sum rate (bit/s/Hz) of each assignment, initialisation first.
struct ClusteringTrace {
  std::vector<Real> objective;
  int iterations = 0;
};

/// Per element, the argument of the weighted phasor resultant; a vanishing resultant gives 0.
PhaseVector circular_mean(std::span<const PhaseVector> points, std::span<const Real> weights);
PhaseVector circular_mean(std::span<const PhaseVector> points);

/// Sum over UEs of the circular distance to their group centroid.
Real within_cluster_distance(const UeProfile& profiles, const ClusterAssignment& assignment);

/// Every UE served with its own optimum (the Z = K reference).
ClusterAssignment unclustered(const UeProfile& profiles);

ClusterAssignment cluster_km(const UeProfile& profiles, const ClusteringSettings& settings,
                             ClusteringTrace* trace = nullptr);
ClusterAssignment cluster_hc(const UeProfile& profiles, const ClusteringSettings& settings);
ClusterAssignment cluster_kmed(const UeProfile& profiles, const ClusteringSettings& settings,
                               ClusteringTrace* trace = nullptr);
ClusterAssignment cluster_cwc(const UeProfile& profiles, const ClusteringSettings& settings,
                              const RadioParams& radio, ClusteringTrace* trace = nullptr);
ClusterAssignment cluster_oscbc(const UeProfile& profiles, const ClusteringSettings& settings);
ClusterAssignment cluster_icwc(const UeProfile& profiles, const ClusteringSettings& settings,
                               const RadioParams& radio, ClusteringTrace* trace = nullptr);

/// Dispatch on settings.algorithm.
ClusterAssignment cluster(const UeProfile& profiles, const ClusteringSettings& settings,
                          const RadioParams& radio, ClusteringTrace* trace = nullptr);

}  // namespace irs

#endif  // IRS_CLUSTERING_HPP
