// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_HARNESS_CONFIG_HPP
#define IRS_HARNESS_CONFIG_HPP

// Experiment description for the sweep runner. The on-disk form is a JSON
// document; every key is optional and unknown keys are rejected with the
// path of the offending field.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "irs/channel.hpp"
#include "irs/clustering.hpp"
#include "irs/core.hpp"
#include "irs/errors.hpp"
#include "irs/optimizer.hpp"

namespace irs::harness {

/// Bad experiment description. what() starts with the field path, e.g. "clustering.z_values[2]: ...".
class ConfigError : public ContractViolation {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : ContractViolation(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ExperimentConfig {
  // geometry
  Real cell_radius_m = 167.0;
  Point2 gnb_position_m = Point2(0.0, 0.0);
  Point2 irs_position_m = Point2(75.0, 100.0);
  std::vector<std::size_t> num_ues{100};

  // arrays; the IRS size is a swept dimension
  AntennaArray gnb{8, 8};
  AntennaArray ue{1, 2};
  std::vector<AntennaArray> irs{AntennaArray{80, 40}};

  // radio
  Real carrier_ghz = 28.0;
  Real bandwidth_hz = 100e6;
  Real tx_power_dbm = 33.0;
  Real noise_psd_dbm_per_hz = -174.0;

  // channel
  std::vector<ChannelMode> channel_modes{ChannelMode::pLoS};
  ClusterModel clusters;

  // 0 stands for continuous phases
  std::vector<int> phase_bits{0};

  OptimizerSettings optimizer;

  // clustering; exactly one of z_values / z_fractions is used
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  std::vector<std::size_t> z_values;
  std::vector<Real> z_fractions{0.2, 0.5, 0.8, 1.0};
  Real mu = 1e-3;
  int km_max_iterations = 50;
  int cwc_max_iterations = 100;

  // Monte Carlo
  std::size_t realizations = 100;
  std::uint64_t master_seed = 1;
  Real percentile_q = 0.95;
  unsigned threads = 0;  // 0: one per hardware thread

  std::string cache_dir;  // empty: no cache unless IRS_SCHED_CACHE_DIR is set

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  /// Z values for a frame of k UEs, ascending and without duplicates.
  std::vector<std::size_t> z_grid(std::size_t k) const;
  RadioParams radio() const;
  ChannelScenario scenario(const AntennaArray& irs_array, ChannelMode mode) const;
  ClusteringSettings clustering(Algorithm algorithm, std::size_t z, std::uint64_t seed) const;
};

/// gNB power that gives a reduced (N_g, N_I) layout the link budget of the
/// 64-antenna, 3200-element reference: 33 dBm + 10 log10(64 * 3200^2 / (N_g * N_I^2)).
Real desk_tx_power_dbm(Eigen::Index n_gnb, Eigen::Index n_irs);

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& file);
/// Fully resolved form; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace irs::harness

#endif  // IRS_HARNESS_CONFIG_HPP
