// SPDX-License-Identifier: Apache-2.0
#include "irs/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "irs/errors.hpp"
#include "irs/seed.hpp"

#ifndef IRS_GIT_VERSION
#define IRS_GIT_VERSION "unknown"
#endif

namespace irs::harness {

namespace {

using Clock = std::chrono::steady_clock;

std::string num(Real x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool same_scenario(const ScenarioPoint& a, const ScenarioPoint& b) {
  return a.num_ues == b.num_ues && a.irs.rows_v == b.irs.rows_v && a.irs.cols_h == b.irs.cols_h &&
         a.irs.element_spacing == b.irs.element_spacing && a.phase_bits == b.phase_bits && a.mode == b.mode;
}

PhaseSet phase_set(int bits) { return bits == 0 ? PhaseSet::continuous() : PhaseSet::quantized(bits); }

std::string describe(const ScenarioPoint& s) {
  return "K=" + std::to_string(s.num_ues) + " irs=" + std::to_string(s.irs.rows_v) + "x" +
         std::to_string(s.irs.cols_h) + " b=" + std::to_string(s.phase_bits) + " mode=" + to_string(s.mode);
}

const char* kPointColumns = "num_ues,irs_rows_v,irs_cols_h,num_irs,phase_bits,channel_mode,algorithm,z";

std::string point_fields(const SweepPoint& p) {
  const auto& s = p.scenario;
  return std::to_string(s.num_ues) + "," + std::to_string(s.irs.rows_v) + "," + std::to_string(s.irs.cols_h) + "," +
         std::to_string(s.irs.size()) + "," + std::to_string(s.phase_bits) + "," + to_string(s.mode) + "," +
         to_string(p.algorithm) + "," + std::to_string(p.z);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

const char* version_string() { return IRS_GIT_VERSION; }

std::vector<SweepPoint> enumerate_points(const ExperimentConfig& c) {
  std::vector<SweepPoint> out;
  for (auto k : c.num_ues)
    for (const auto& irs : c.irs)
      for (int b : c.phase_bits)
        for (auto mode : c.channel_modes)
          for (auto alg : c.algorithms)
            for (auto z : c.z_grid(k)) out.push_back(SweepPoint{ScenarioPoint{k, irs, b, mode}, alg, z});
  return out;
}

UeProfile realization_profile(const ExperimentConfig& c, const ScenarioPoint& s, std::uint64_t seed_r,
                              const ProfileCache& cache, bool* cache_hit) {
  const std::uint64_t geometry_seed = derive_seed(seed_r, 1);
  const std::uint64_t channel_seed = derive_seed(seed_r, 2);
  const ChannelScenario scenario = c.scenario(s.irs, s.mode);
  const RadioParams radio = c.radio();
  const PhaseSet set = phase_set(s.phase_bits);

  const ScenarioGeometry geom =
      sample_geometry(geometry_seed, s.num_ues, c.cell_radius_m, c.gnb_position_m, c.irs_position_m);
  auto channels = std::make_shared<const ChannelRealization>(synthesize_channel(channel_seed, geom, scenario));

  ProfileKey key{geometry_seed,  channel_seed, s.num_ues,         c.cell_radius_m,        c.gnb_position_m,
                 c.irs_position_m, scenario,   s.phase_bits,      c.optimizer,            c.tx_power_dbm,
                 c.noise_psd_dbm_per_hz, c.bandwidth_hz};
  if (auto hit = cache.load(key)) {
    if (cache_hit) *cache_hit = true;
    UeProfile p;
    p.channels = std::move(channels);
    p.optima = std::move(*hit);
    p.phase_set = set;
    return p;
  }
  if (cache_hit) *cache_hit = false;
  UeProfile p = build_profile(std::move(channels), set, c.optimizer, radio);
  cache.store(key, p.optima);
  return p;
}

SweepResult run_sweep(const ExperimentConfig& c, std::ostream* progress) {
  c.validate();
  SweepResult result;
  result.points = enumerate_points(c);
  const RadioParams radio = c.radio();
  const ProfileCache cache = ProfileCache::resolve(c.cache_dir);

  // Group points by scenario; one task per (scenario, realization).
  std::vector<ScenarioPoint> scenarios;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& s = result.points[i].scenario;
    if (scenarios.empty() || !same_scenario(scenarios.back(), s)) {
      scenarios.push_back(s);
      members.emplace_back();
    }
    members.back().push_back(i);
  }

  const std::size_t n_tasks = scenarios.size() * c.realizations;
  std::vector<std::vector<RealizationRecord>> slots(n_tasks);
  std::vector<std::string> errors(n_tasks);
  std::atomic<std::size_t> next{0}, hits{0}, misses{0}, done{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (std::size_t t = next++; t < n_tasks; t = next++) {
      const std::size_t si = t / c.realizations;
      const std::size_t r = t % c.realizations;
      const std::uint64_t seed_r = derive_seed(c.master_seed, r);
      try {
        const auto t0 = Clock::now();
        bool hit = false;
        const UeProfile prof = realization_profile(c, scenarios[si], seed_r, cache, &hit);
        ++(hit ? hits : misses);
        const Real profile_time = std::chrono::duration<Real>(Clock::now() - t0).count();

        Real iters = 0, conv = 0;
        for (const auto& o : prof.optima) {
          iters += o.iterations_used;
          conv += o.converged ? 1 : 0;
        }
        const auto k = static_cast<Real>(prof.num_ues());

        for (std::size_t pi : members[si]) {
          const auto& pt = result.points[pi];
          const auto t1 = Clock::now();
          const auto settings = c.clustering(pt.algorithm, pt.z, derive_seed(seed_r, 3));
          const auto assignment = cluster(prof, settings, radio);
          RealizationRecord rec;
          rec.point = pi;
          rec.realization = r;
          rec.seed = seed_r;
          rec.report = evaluate(assignment, prof, radio, c.percentile_q);
          rec.optimizer_iterations_mean = iters / k;
          rec.optimizer_converged_fraction = conv / k;
          rec.wall_time_s = std::chrono::duration<Real>(Clock::now() - t1).count() +
                            profile_time / static_cast<Real>(members[si].size());
          slots[t].push_back(std::move(rec));
        }
      } catch (const std::exception& e) {
        slots[t].clear();
        errors[t] = describe(scenarios[si]) + " realization " + std::to_string(r) + ": " + e.what();
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard<std::mutex> lock(log_mutex);
        *progress << "[" << finished << "/" << n_tasks << "] " << describe(scenarios[si]) << " realization " << r
                  << (errors[t].empty() ? "" : " FAILED") << "\n";
      }
    }
  };

  unsigned n_threads = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_tasks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Reorder to (point, realization).
  std::vector<std::vector<RealizationRecord>> by_point(result.points.size());
  for (auto& slot : slots)
    for (auto& rec : slot) by_point[rec.point].push_back(std::move(rec));
  for (auto& v : by_point) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.realization < b.realization; });
    for (auto& rec : v) result.raw.push_back(std::move(rec));
  }
  for (auto& e : errors)
    if (!e.empty()) result.failures.push_back(std::move(e));

  for (auto& row : aggregate_rows(result.points, result.raw))
    if (row.realizations == c.realizations) result.rows.push_back(std::move(row));
  result.cache_hits = hits;
  result.cache_misses = misses;
  return result;
}

std::vector<ResultRow> aggregate_rows(const std::vector<SweepPoint>& points,
                                      const std::vector<RealizationRecord>& raw) {
  std::vector<std::vector<const RealizationRecord*>> by_point(points.size());
  for (const auto& rec : raw) {
    detail::require(rec.point < points.size(), "aggregate_rows: record refers to an unknown point");
    by_point[rec.point].push_back(&rec);
  }

  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& recs = by_point[i];
    if (recs.empty()) continue;
    std::vector<MetricsReport> reports;
    ResultRow row;
    row.point = points[i];
    row.realizations = recs.size();
    for (const auto* r : recs) {
      reports.push_back(r->report);
      row.optimizer_iterations_mean += r->optimizer_iterations_mean;
      row.optimizer_converged_fraction += r->optimizer_converged_fraction;
      row.wall_time_s += r->wall_time_s;
    }
    const MetricsReport agg = aggregate(reports);
    const auto n = static_cast<Real>(recs.size());
    row.avg_sum_capacity_mbit = agg.avg_sum_capacity / 1e6;
    row.percentile_q = agg.percentile_q;
    row.percentile_capacity_mbit = agg.percentile_capacity / 1e6;
    row.effective_z_mean = agg.mean_effective_z;
    row.optimizer_iterations_mean /= n;
    row.optimizer_converged_fraction /= n;
    if (recs.size() > 1) {
      Real ss = 0;
      for (const auto* r : recs) {
        const Real d = r->report.avg_sum_capacity / 1e6 - row.avg_sum_capacity_mbit;
        ss += d * d;
      }
      row.avg_sum_capacity_se_mbit = std::sqrt(ss / (n - 1) / n);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kPointColumns
      << ",realizations,avg_sum_capacity_mbit,avg_sum_capacity_se_mbit,percentile_q,percentile_capacity_mbit,"
         "effective_z_mean,optimizer_iterations_mean,optimizer_converged_fraction\n";
  for (const auto& r : rows)
    out << point_fields(r.point) << "," << r.realizations << "," << num(r.avg_sum_capacity_mbit) << ","
        << num(r.avg_sum_capacity_se_mbit) << "," << num(r.percentile_q) << "," << num(r.percentile_capacity_mbit)
        << "," << num(r.effective_z_mean) << "," << num(r.optimizer_iterations_mean) << ","
        << num(r.optimizer_converged_fraction) << "\n";
}

void write_raw_csv(std::ostream& out, const std::vector<SweepPoint>& points,
                   const std::vector<RealizationRecord>& raw) {
  out << kPointColumns
      << ",realization,seed,bandwidth_hz,percentile_q,avg_sum_capacity_mbit,percentile_capacity_mbit,effective_z,"
         "optimizer_iterations_mean,optimizer_converged_fraction,rates\n";
  for (const auto& rec : raw) {
    const auto& m = rec.report;
    out << point_fields(points[rec.point]) << "," << rec.realization << "," << rec.seed << ","
        << num(m.bandwidth_hz) << "," << num(m.percentile_q) << "," << num(m.avg_sum_capacity / 1e6) << ","
        << num(m.percentile_capacity / 1e6) << "," << num(m.mean_effective_z) << ","
        << num(rec.optimizer_iterations_mean) << "," << num(rec.optimizer_converged_fraction) << ",";
    for (std::size_t i = 0; i < m.per_ue_rate.size(); ++i) out << (i ? ";" : "") << num(m.per_ue_rate[i]);
    out << "\n";
  }
}

void write_timing_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kPointColumns << ",wall_time_s\n";
  for (const auto& r : rows) out << point_fields(r.point) << "," << num(r.wall_time_s) << "\n";
}

nlohmann::json sidecar(const ExperimentConfig& config, const SweepResult& result) {
  return nlohmann::json{{"version", version_string()},
                        {"config", to_json(config)},
                        {"points", result.points.size()},
                        {"complete_points", result.rows.size()},
                        {"failures", result.failures},
                        {"units",
                         {{"avg_sum_capacity", "Mbit/slot"},
                          {"percentile_capacity", "Mbit/slot"},
                          {"rates", "bit/s/Hz"}}}};
}

void write_outputs(const std::filesystem::path& stem, const ExperimentConfig& config, const SweepResult& result) {
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  auto open = [&](const std::string& suffix) {
    std::ofstream f(stem.string() + suffix);
    if (!f) throw std::runtime_error("cannot write " + stem.string() + suffix);
    return f;
  };
  {
    auto f = open(".csv");
    write_summary_csv(f, result.rows);
  }
  {
    auto f = open("_raw.csv");
    write_raw_csv(f, result.points, result.raw);
  }
  {
    auto f = open(".json");
    f << sidecar(config, result).dump(2) << "\n";
  }
  {
    auto f = open("_timing.csv");
    write_timing_csv(f, result.rows);
  }
}

RawTable read_raw_csv(std::istream& in) {
  RawTable table;
  std::string line;
  if (!std::getline(in, line)) throw ContractViolation("raw csv: empty input");
  const auto header = split(line, ',');
  if (header.size() != 18 || header.front() != "num_ues" || header.back() != "rates")
    throw ContractViolation("raw csv: unexpected header");

  std::map<std::string, std::size_t> index;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    const std::string where = "raw csv line " + std::to_string(lineno) + ": ";
    if (f.size() != 18) throw ContractViolation(where + "expected 18 fields");
    try {
      SweepPoint p;
      p.scenario.num_ues = std::stoul(f[0]);
      p.scenario.irs = AntennaArray{std::stoi(f[1]), std::stoi(f[2])};
      p.scenario.phase_bits = std::stoi(f[4]);
      p.scenario.mode = parse_channel_mode(f[5]);
      p.algorithm = parse_algorithm(f[6]);
      p.z = std::stoul(f[7]);
      const std::string key = point_fields(p);
      auto [it, fresh] = index.emplace(key, table.points.size());
      if (fresh) table.points.push_back(p);

      RealizationRecord rec;
      rec.point = it->second;
      rec.realization = std::stoul(f[8]);
      rec.seed = std::stoull(f[9]);
      MetricsReport& m = rec.report;
      m.bandwidth_hz = std::stod(f[10]);
      m.percentile_q = std::stod(f[11]);
      m.mean_effective_z = std::stod(f[14]);
      rec.optimizer_iterations_mean = std::stod(f[15]);
      rec.optimizer_converged_fraction = std::stod(f[16]);
      for (const auto& r : split(f[17], ';')) m.per_ue_rate.push_back(std::stod(r));
      m.num_ues = m.per_ue_rate.size();
      if (m.num_ues != p.scenario.num_ues) throw ContractViolation("rate count differs from num_ues");
      // The capacity columns are rounded; rebuild them from the exact rates.
      Real total = 0;
      for (Real r : m.per_ue_rate) total += r;
      const auto k = static_cast<Real>(m.num_ues);
      m.sum_capacity = m.bandwidth_hz * total;
      m.avg_sum_capacity = m.sum_capacity / k;
      m.percentile_capacity = m.bandwidth_hz / k * empirical_quantile(m.per_ue_rate, m.percentile_q);
      table.raw.push_back(std::move(rec));
    } catch (const ContractViolation& e) {
      throw ContractViolation(where + e.what());
    } catch (const std::logic_error& e) {
      throw ContractViolation(where + "malformed number (" + e.what() + ")");
    }
  }
  return table;
}

}  // namespace irs::harness
