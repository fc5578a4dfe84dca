// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_HARNESS_SWEEP_HPP
#define IRS_HARNESS_SWEEP_HPP

// Seeded Monte-Carlo sweep over (K, IRS size, b, channel mode) scenarios and
// (algorithm, Z) points.
//
// Realization r of every scenario uses seed_r = derive_seed(master, r), with
// derive_seed(seed_r, 1) for the UE drop, derive_seed(seed_r, 2) for the
// channels and derive_seed(seed_r, 3) for the clustering initialisation. All
// scenarios with the same K therefore share UE positions, and results are
// paired across algorithms, Z, b and channel modes.
//
// Outputs, for a stem S:
//   S.csv         one aggregated row per sweep point
//   S_raw.csv     one row per (point, realization), with the per-UE rates
//   S.json        resolved config and version stamp
//   S_timing.csv  wall time per point (the only non-deterministic file)

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "irs/harness/cache.hpp"
#include "irs/harness/config.hpp"
#include "irs/scheduler.hpp"

namespace irs::harness {

/// Version stamp baked in at configure time (git describe).
const char* version_string();

struct ScenarioPoint {
  std::size_t num_ues = 0;
  AntennaArray irs;
  int phase_bits = 0;
  ChannelMode mode = ChannelMode::pLoS;
};

struct SweepPoint {
  ScenarioPoint scenario;
  Algorithm algorithm = Algorithm::CWC;
  std::size_t z = 1;
};

struct RealizationRecord {
  std::size_t point = 0;  // index into SweepResult::points
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  MetricsReport report;
  Real optimizer_iterations_mean = 0;
  Real optimizer_converged_fraction = 0;
  Real wall_time_s = 0;
};

struct ResultRow {
  SweepPoint point;
  std::size_t realizations = 0;
  Real avg_sum_capacity_mbit = 0;     // C-bar
  Real avg_sum_capacity_se_mbit = 0;  // standard error of the per-realization C-bar
  Real percentile_q = 0;
  Real percentile_capacity_mbit = 0;  // over the pooled per-UE rates
  Real effective_z_mean = 0;
  Real optimizer_iterations_mean = 0;
  Real optimizer_converged_fraction = 0;
  Real wall_time_s = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<RealizationRecord> raw;   // ordered by (point, realization)
  std::vector<ResultRow> rows;          // complete points only, in point order
  std::vector<std::string> failures;
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;
  bool complete() const { return failures.empty(); }
};

/// Scenario-major enumeration: K, IRS size, b, mode, then algorithm, then Z.
std::vector<SweepPoint> enumerate_points(const ExperimentConfig& config);

/// Per-UE optima for one realization of one scenario, through the cache when enabled.
UeProfile realization_profile(const ExperimentConfig& config, const ScenarioPoint& scenario,
                              std::uint64_t realization_seed, const ProfileCache& cache, bool* cache_hit = nullptr);

/// `progress`, when given, receives one line per finished realization.
SweepResult run_sweep(const ExperimentConfig& config, std::ostream* progress = nullptr);

/// Fold per-realization records into rows; points with no records are skipped.
std::vector<ResultRow> aggregate_rows(const std::vector<SweepPoint>& points,
                                      const std::vector<RealizationRecord>& raw);

void write_summary_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_raw_csv(std::ostream& out, const std::vector<SweepPoint>& points,
                   const std::vector<RealizationRecord>& raw);
void write_timing_csv(std::ostream& out, const std::vector<ResultRow>& rows);
nlohmann::json sidecar(const ExperimentConfig& config, const SweepResult& result);

/// Writes the four files next to `stem`, creating its directory.
void write_outputs(const std::filesystem::path& stem, const ExperimentConfig& config, const SweepResult& result);

struct RawTable {
  std::vector<SweepPoint> points;
  std::vector<RealizationRecord> raw;
};
/// Inverse of write_raw_csv; throws ContractViolation with the line number on malformed input.
RawTable read_raw_csv(std::istream& in);

}  // namespace irs::harness

#endif  // IRS_HARNESS_SWEEP_HPP
