// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_HARNESS_ORACLE_HPP
#define IRS_HARNESS_ORACLE_HPP

// Brute-force references on instances small enough to enumerate.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "irs/channel.hpp"
#include "irs/clustering.hpp"
#include "irs/core.hpp"
#include "irs/optimizer.hpp"

namespace irs::harness {

inline constexpr std::size_t kMaxOracleIrs = 10;
inline constexpr std::size_t kMaxOracleConfigs = 4096;
inline constexpr std::size_t kMaxOracleUes = 8;
inline constexpr std::size_t kMaxOracleZ = 3;

struct ExhaustiveOptimum {
  IrsConfiguration config;
  Real rate = 0;  // bit/s/Hz, with the best beamformers for `config`
  std::size_t candidates = 0;
};

/// Best of all (2^b)^N_I grid configurations; the first maximiser in
/// lexicographic grid-index order wins ties.
ExhaustiveOptimum exhaustive_config(const CMatrix& g_k, const CMatrix& h, const PhaseSet& set,
                                    const RadioParams& radio);

struct OracleConfigSpec {
  std::size_t num_irs = 6;  // one row of elements
  int bits = 1;
  std::size_t seeds = 50;
  std::uint64_t master_seed = 1;
  AntennaArray gnb{4, 4};
  AntennaArray ue{1, 2};
  ChannelMode mode = ChannelMode::pLoS;
  std::optional<Real> tx_power_dbm;  // default: desk_tx_power_dbm for this layout
  OptimizerSettings optimizer;
};

struct OracleConfigReport {
  std::vector<Real> alg1_rate;
  std::vector<Real> exhaustive_rate;
  std::vector<Real> ratio;  // alg1 / exhaustive, 1 when both are zero
  Real min_ratio = 0;
  Real median_ratio = 0;
};

/// One single-UE instance per seed; refuses instances above the enumeration bound.
OracleConfigReport run_oracle_config(const OracleConfigSpec& spec);

struct PartitionOptimum {
  ClusterAssignment assignment;
  Real sum_capacity = 0;  // bit/frame
  std::size_t partitions = 0;
};

/// Best partition of the UEs into at most z groups, each group served with the
/// rate-weighted circular mean of its members' optima (weights: optimal rates),
/// projected onto the profile's phase set.
PartitionOptimum exhaustive_partition(const UeProfile& profiles, std::size_t z, const RadioParams& radio);

struct OraclePartitionSpec {
  std::size_t num_ues = 6;
  std::size_t z = 2;
  std::size_t seeds = 20;
  std::uint64_t master_seed = 1;
  AntennaArray gnb{4, 4};
  AntennaArray irs{4, 8};
  AntennaArray ue{1, 2};
  int bits = 0;
  ChannelMode mode = ChannelMode::pLoS;
  std::optional<Real> tx_power_dbm;
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
};

struct OraclePartitionReport {
  std::vector<Real> optimum_capacity;                  // bit/frame, per seed
  std::map<Algorithm, std::vector<Real>> ratio;        // heuristic / optimum, per seed
  std::map<Algorithm, Real> median_ratio;
};

OraclePartitionReport run_oracle_partition(const OraclePartitionSpec& spec);

Real median(std::vector<Real> values);

}  // namespace irs::harness

#endif  // IRS_HARNESS_ORACLE_HPP
