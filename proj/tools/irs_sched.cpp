// SPDX-License-Identifier: Apache-2.0
// irs-sched: sweep runner, brute-force oracles and result re-aggregation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irs/harness/config.hpp"
#include "irs/harness/oracle.hpp"
#include "irs/harness/sweep.hpp"

using namespace irs;
using namespace irs::harness;

namespace {

enum Exit { kOk = 0, kIncomplete = 1, kUsage = 2 };

struct SweepArgs {
  std::string config;
  std::string out = "results/sweep";
  std::vector<std::size_t> num_ues;
  std::vector<int> phase_bits;
  std::vector<std::string> modes;
  std::vector<std::string> algorithms;
  std::vector<std::size_t> z;
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 0;
  std::string cache_dir;
  bool quiet = false;
};

int run_sweep_verb(const SweepArgs& a) {
  ExperimentConfig c = a.config.empty() ? ExperimentConfig{} : load_config(a.config);
  if (!a.num_ues.empty()) c.num_ues = a.num_ues;
  if (!a.phase_bits.empty()) c.phase_bits = a.phase_bits;
  if (!a.modes.empty()) {
    c.channel_modes.clear();
    for (const auto& m : a.modes) c.channel_modes.push_back(parse_channel_mode(m));
  }
  if (!a.algorithms.empty()) {
    c.algorithms.clear();
    for (const auto& s : a.algorithms) c.algorithms.push_back(parse_algorithm(s));
  }
  if (!a.z.empty()) {
    c.z_values = a.z;
    c.z_fractions.clear();
  }
  if (a.realizations) c.realizations = a.realizations;
  if (a.seed_set) c.master_seed = a.seed;
  if (a.threads) c.threads = a.threads;
  if (!a.cache_dir.empty()) c.cache_dir = a.cache_dir;
  c.validate();

  const SweepResult r = run_sweep(c, a.quiet ? nullptr : &std::cerr);
  write_outputs(a.out, c, r);
  std::cerr << "wrote " << a.out << ".csv (" << r.rows.size() << "/" << r.points.size() << " points), cache "
            << r.cache_hits << " hits / " << r.cache_misses << " misses\n";
  for (const auto& f : r.failures) std::cerr << "failed: " << f << "\n";
  return r.complete() ? kOk : kIncomplete;
}

int run_report_verb(const std::string& raw_path, const std::string& out) {
  std::ifstream in(raw_path);
  if (!in) throw std::runtime_error("cannot open " + raw_path);
  const RawTable t = read_raw_csv(in);
  const auto rows = aggregate_rows(t.points, t.raw);
  if (out.empty()) {
    write_summary_csv(std::cout, rows);
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    write_summary_csv(f, rows);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted TDMA scheduling simulator"};
  app.set_version_flag("--version", std::string(version_string()));
  app.require_subcommand(1);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep described by a JSON config");
  sweep->add_option("-c,--config", sw.config, "experiment config (JSON); defaults apply when omitted");
  sweep->add_option("-o,--out", sw.out, "output stem; writes STEM.csv, STEM_raw.csv, STEM.json, STEM_timing.csv")
      ->capture_default_str();
  sweep->add_option("--num-ues", sw.num_ues, "override K list");
  sweep->add_option("--phase-bits", sw.phase_bits, "override phase resolutions (0 = continuous)");
  sweep->add_option("--modes", sw.modes, "override channel modes (dLoS, NLoS, pLoS)");
  sweep->add_option("--algorithms", sw.algorithms, "override algorithms (KM HC KMed CWC OSCBC ICWC)");
  sweep->add_option("--z", sw.z, "override Z values");
  sweep->add_option("--realizations", sw.realizations, "override realization count");
  sweep->add_option("--seed", sw.seed, "override master seed")->each([&](const std::string&) { sw.seed_set = true; });
  sweep->add_option("--threads", sw.threads, "worker threads (0 = hardware)");
  sweep->add_option("--cache-dir", sw.cache_dir, "per-UE optima cache directory (IRS_SCHED_CACHE_DIR wins)");
  sweep->add_flag("-q,--quiet", sw.quiet, "no per-realization progress");

  OracleConfigSpec oc;
  std::string oc_mode = "pLoS";
  auto* ocfg = app.add_subcommand("oracle-config", "compare the per-UE optimiser with exhaustive search");
  ocfg->add_option("--irs", oc.num_irs, "IRS elements (one row)")->capture_default_str();
  ocfg->add_option("--bits", oc.bits, "phase resolution b")->capture_default_str();
  ocfg->add_option("--seeds", oc.seeds, "instances")->capture_default_str();
  ocfg->add_option("--seed", oc.master_seed, "master seed")->capture_default_str();
  ocfg->add_option("--mode", oc_mode, "channel mode")->capture_default_str();

  OraclePartitionSpec op;
  std::string op_mode = "pLoS";
  auto* opart = app.add_subcommand("oracle-partition", "compare clustering heuristics with exhaustive partitioning");
  opart->add_option("--k", op.num_ues, "UEs")->capture_default_str();
  opart->add_option("--z", op.z, "maximum groups")->capture_default_str();
  opart->add_option("--seeds", op.seeds, "instances")->capture_default_str();
  opart->add_option("--seed", op.master_seed, "master seed")->capture_default_str();
  opart->add_option("--bits", op.bits, "phase resolution (0 = continuous)")->capture_default_str();
  opart->add_option("--irs-rows", op.irs.rows_v, "IRS rows")->capture_default_str();
  opart->add_option("--irs-cols", op.irs.cols_h, "IRS columns")->capture_default_str();
  opart->add_option("--mode", op_mode, "channel mode")->capture_default_str();

  std::string raw_path, report_out;
  auto* report = app.add_subcommand("report", "re-aggregate a raw per-realization CSV");
  report->add_option("raw", raw_path, "STEM_raw.csv from a sweep")->required();
  report->add_option("-o,--out", report_out, "summary CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sweep) return run_sweep_verb(sw);

    if (*ocfg) {
      oc.mode = parse_channel_mode(oc_mode);
      const auto r = run_oracle_config(oc);
      std::printf("seed,alg1_rate,exhaustive_rate,ratio\n");
      for (std::size_t i = 0; i < r.ratio.size(); ++i)
        std::printf("%zu,%.10g,%.10g,%.6f\n", i, r.alg1_rate[i], r.exhaustive_rate[i], r.ratio[i]);
      std::printf("# min_ratio=%.6f median_ratio=%.6f\n", r.min_ratio, r.median_ratio);
      return kOk;
    }

    if (*opart) {
      op.mode = parse_channel_mode(op_mode);
      const auto r = run_oracle_partition(op);
      std::printf("seed,optimum_mbit_per_frame");
      for (const auto& [a, v] : r.ratio) std::printf(",%s", to_string(a).c_str());
      std::printf("\n");
      for (std::size_t i = 0; i < r.optimum_capacity.size(); ++i) {
        std::printf("%zu,%.10g", i, r.optimum_capacity[i] / 1e6);
        for (const auto& [a, v] : r.ratio) std::printf(",%.6f", v[i]);
        std::printf("\n");
      }
      std::printf("# median ratio:");
      for (const auto& [a, m] : r.median_ratio) std::printf(" %s=%.6f", to_string(a).c_str(), m);
      std::printf("\n");
      return kOk;
    }

    if (*report) return run_report_verb(raw_path, report_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIncomplete;
  }
  return kUsage;
}
