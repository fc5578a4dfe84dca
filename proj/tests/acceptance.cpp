// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion.
//
// Criteria listed in kKnownRed fail for reasons analysed in the project notes
// and are reported as FAIL without failing the run; an unexpected FAIL, or a
// known-red criterion that starts passing, makes the exit status non-zero.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "irs/channel.hpp"
#include "irs/clustering.hpp"
#include "irs/harness/config.hpp"
#include "irs/harness/oracle.hpp"
#include "irs/harness/sweep.hpp"
#include "irs/scheduler.hpp"
#include "irs/seed.hpp"
#include "properties.hpp"

using namespace irs;
using namespace irs::harness;

namespace {

const std::set<int> kKnownRed{2, 3, 9};

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

Real seconds_since(Clock::time_point t0) {
  return std::chrono::duration<Real>(Clock::now() - t0).count();
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string cache_dir() {
  if (const char* env = std::getenv(kCacheDirEnv); env && *env) return env;
  return (std::filesystem::temp_directory_path() / "irs_acceptance_cache").string();
}

constexpr std::size_t kK = 40;
constexpr std::size_t kRealizations = 100;

ExperimentConfig desk_config() {
  ExperimentConfig c;
  c.num_ues = {kK};
  c.gnb = {4, 4};
  c.ue = {1, 2};
  c.irs = {AntennaArray{16, 8}};  // 8 horizontal x 16 vertical
  c.tx_power_dbm = desk_tx_power_dbm(c.gnb.size(), c.irs.front().size());
  c.phase_bits = {0};
  c.channel_modes = {ChannelMode::pLoS};
  c.z_values = {1};
  for (std::size_t z = 4; z <= kK; z += 4) c.z_values.push_back(z);
  c.z_fractions.clear();
  c.realizations = kRealizations;
  c.master_seed = 1;
  c.threads = 0;
  c.cache_dir = cache_dir();
  return c;
}

/// Per-realization records of one sweep point, in realization order.
struct PointData {
  std::vector<const RealizationRecord*> recs;
  const ResultRow* row = nullptr;
};

class Sweep {
 public:
  explicit Sweep(const ExperimentConfig& c) : config_(c), result_(run_sweep(c)) {
    for (std::size_t i = 0; i < result_.rows.size(); ++i) rows_[key(result_.rows[i].point)] = &result_.rows[i];
  }
  const SweepResult& result() const { return result_; }

  PointData at(Algorithm a, std::size_t z, int bits = 0, ChannelMode mode = ChannelMode::pLoS) const {
    PointData d;
    for (std::size_t i = 0; i < result_.points.size(); ++i) {
      const auto& p = result_.points[i];
      if (p.algorithm != a || p.z != z || p.scenario.phase_bits != bits || p.scenario.mode != mode) continue;
      for (const auto& r : result_.raw)
        if (r.point == i) d.recs.push_back(&r);
      auto it = rows_.find(key(p));
      if (it != rows_.end()) d.row = it->second;
    }
    std::sort(d.recs.begin(), d.recs.end(),
              [](const auto* x, const auto* y) { return x->realization < y->realization; });
    return d;
  }

 private:
  static std::string key(const SweepPoint& p) {
    return to_string(p.algorithm) + "/" + std::to_string(p.z) + "/" + std::to_string(p.scenario.phase_bits) + "/" +
           to_string(p.scenario.mode);
  }
  ExperimentConfig config_;
  SweepResult result_;
  std::map<std::string, const ResultRow*> rows_;
};

/// Mean and standard error of the paired per-realization difference f(a) - f(b).
std::pair<Real, Real> paired(const PointData& a, const PointData& b,
                             const std::function<Real(const MetricsReport&)>& f) {
  const std::size_t n = std::min(a.recs.size(), b.recs.size());
  std::vector<Real> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = f(a.recs[i]->report) - f(b.recs[i]->report);
  const Real mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<Real>(n);
  Real ss = 0;
  for (Real x : d) ss += (x - mean) * (x - mean);
  return {mean, n > 1 ? std::sqrt(ss / static_cast<Real>(n - 1) / static_cast<Real>(n)) : 0.0};
}

Real cbar_mbit(const MetricsReport& m) { return m.avg_sum_capacity / 1e6; }

std::function<Real(const MetricsReport&)> percentile_mbit(Real q) {
  return [q](const MetricsReport& m) {
    return m.bandwidth_hz / static_cast<Real>(m.num_ues) * empirical_quantile(m.per_ue_rate, q) / 1e6;
  };
}

/// (B/K) times the q-quantile of the per-UE rates pooled over all realizations, Mbit/slot.
Real pooled_percentile_mbit(const PointData& d, Real q) {
  std::vector<Real> all;
  for (const auto* r : d.recs) all.insert(all.end(), r->report.per_ue_rate.begin(), r->report.per_ue_rate.end());
  const auto& m = d.recs.front()->report;
  return m.bandwidth_hz / static_cast<Real>(m.num_ues) * empirical_quantile(all, q) / 1e6;
}

Real mean_cbar(const PointData& d) {
  Real s = 0;
  for (const auto* r : d.recs) s += cbar_mbit(r->report);
  return s / static_cast<Real>(d.recs.size());
}

std::vector<Real> ranks(const std::vector<Real>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<Real> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = 0.5 * static_cast<Real>(i + j) + 1;
    i = j + 1;
  }
  return r;
}

Real spearman(const std::vector<Real>& x, const std::vector<Real>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const Real n = static_cast<Real>(x.size());
  const Real mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n, my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  Real sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------

Verdict c1_equivalence() {
  const auto t0 = Clock::now();
  ChannelScenario sc;
  sc.gnb = {4, 4};
  sc.irs = {4, 8};
  sc.ue = {1, 2};
  const RadioParams radio = RadioParams::from_dbm(100e6, desk_tx_power_dbm(16, 32), -174);
  const std::size_t k = 10;
  Real worst = 0;
  std::size_t checks = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::uint64_t seed = derive_seed(1, s);
    const auto geom = sample_geometry(derive_seed(seed, 1), k, 167, Point2(0, 0), Point2(75, 100));
    auto ch = std::make_shared<const ChannelRealization>(synthesize_channel(derive_seed(seed, 2), geom, sc));
    for (int bits : {0, 1, 2}) {
      const PhaseSet set = bits ? PhaseSet::quantized(bits) : PhaseSet::continuous();
      const UeProfile p = build_profile(ch, set, OptimizerSettings{}, radio);
      const Real base = evaluate(unclustered(p), p, radio).avg_sum_capacity;
      for (Algorithm a : kAllAlgorithms) {
        ClusteringSettings cs;
        cs.algorithm = a;
        cs.z_max = k;
        cs.seed = derive_seed(seed, 3);
        const Real c = evaluate(cluster(p, cs, radio), p, radio).avg_sum_capacity;
        worst = std::max(worst, std::abs(c - base) / base);
        ++checks;
      }
    }
  }
  const Real t = seconds_since(t0);
  return {worst <= 1e-9 && t < 60,
          fmt("%zu comparisons, max relative gap %.3g (tol 1e-9), %.1f s (limit 60 s)", checks, worst, t)};
}

Verdict c2_oracle() {
  const auto t0 = Clock::now();
  const OracleConfigReport r = run_oracle_config(OracleConfigSpec{});
  const Real t = seconds_since(t0);
  return {r.min_ratio >= 0.9 && r.median_ratio >= 0.98 && t < 60,
          fmt("N_I=6 b=1 50 seeds: min ratio %.4f (>= 0.9), median %.4f (>= 0.98), %.1f s", r.min_ratio,
              r.median_ratio, t)};
}

Verdict c3_convergence() {
  ChannelScenario sc;
  sc.gnb = {4, 4};
  sc.irs = {16, 8};
  sc.ue = {1, 2};
  const RadioParams radio = RadioParams::from_dbm(100e6, desk_tx_power_dbm(16, 128), -174);
  std::size_t fast = 0;
  const std::size_t n = 200;
  std::vector<int> iters;
  for (std::uint64_t s = 0; s < n; ++s) {
    const std::uint64_t seed = derive_seed(1, s);
    const auto geom = sample_geometry(derive_seed(seed, 1), 1, 167, Point2(0, 0), Point2(75, 100));
    const auto ch = synthesize_channel(derive_seed(seed, 2), geom, sc);
    const auto o = optimize_ue(ch.g[0], ch.h, PhaseSet::continuous(), OptimizerSettings{}, radio);
    fast += o.converged && o.iterations_used <= 10;
    iters.push_back(o.iterations_used);
  }
  std::sort(iters.begin(), iters.end());
  const Real frac = static_cast<Real>(fast) / static_cast<Real>(n);
  return {frac >= 0.95, fmt("converged within 10 rounds in %.1f%% of %zu seeds (>= 95%%); median %d rounds, max %d",
                            100 * frac, n, iters[n / 2], iters.back())};
}

Verdict c4_trend(const Sweep& sw, const ExperimentConfig& c) {
  Verdict v{true, ""};
  Real worst_rho = 2, worst_gap = 0;
  std::string worst_alg;
  for (Algorithm a : kAllAlgorithms) {
    std::vector<Real> zs, cs;
    for (std::size_t z : c.z_values) {
      const PointData d = sw.at(a, z);
      if (d.recs.size() != c.realizations) return {false, "sweep incomplete at " + to_string(a)};
      zs.push_back(static_cast<Real>(z));
      cs.push_back(mean_cbar(d));
    }
    const Real rho = spearman(zs, cs);
    if (rho < worst_rho) {
      worst_rho = rho;
      worst_alg = to_string(a);
    }
    // Z = K against the unclustered baseline, realization by realization
    const PointData full = sw.at(a, kK);
    for (const auto* r : full.recs) {
      const UeProfile p = realization_profile(c, full.row->point.scenario, r->seed, ProfileCache::resolve(c.cache_dir));
      const Real base = evaluate(unclustered(p), p, c.radio(), c.percentile_q).avg_sum_capacity;
      worst_gap = std::max(worst_gap, std::abs(r->report.avg_sum_capacity - base) / base);
    }
  }
  v.pass = worst_rho >= 0.95 && worst_gap <= 1e-9;
  v.detail = fmt("min Spearman rho %.4f (%s, >= 0.95); max |C(Z=K) - unclustered| / unclustered %.2g", worst_rho,
                 worst_alg.c_str(), worst_gap);
  return v;
}

Verdict c5_ordering(const Sweep& sw) {
  bool ok = true;
  std::string detail;
  for (std::size_t z : {kK / 5, kK / 2}) {
    const PointData cwc = sw.at(Algorithm::CWC, z);
    detail += fmt("Z=%zu: CWC %.2f", z, mean_cbar(cwc));
    for (Algorithm a : {Algorithm::KM, Algorithm::HC, Algorithm::KMed, Algorithm::ICWC}) {
      const auto [m, se] = paired(cwc, sw.at(a, z), cbar_mbit);
      ok = ok && m > se;
      detail += fmt(", -%s %+.2f (SE %.2f)", to_string(a).c_str(), m, se);
    }
    const Real gap = std::abs(mean_cbar(cwc) - mean_cbar(sw.at(Algorithm::OSCBC, z))) / mean_cbar(cwc);
    ok = ok && gap <= 0.1;
    detail += fmt(", |CWC-OSCBC|/CWC %.3f; ", gap);
  }
  return {ok, detail + "Mbit/slot"};
}

Verdict c6_fairness(const Sweep& sw) {
  // Low-tail percentile (q = 0.05) of the per-UE rates, see the notes on C95.
  const Real q = 0.05;
  bool ok = true;
  std::string detail;
  for (std::size_t z : {kK / 2, kK * 4 / 5}) {
    const PointData icwc = sw.at(Algorithm::ICWC, z);
    detail += fmt("Z=%zu: ICWC %.4g", z, pooled_percentile_mbit(icwc, q));
    for (Algorithm a : {Algorithm::CWC, Algorithm::OSCBC}) {
      const PointData other = sw.at(a, z);
      const Real margin = pooled_percentile_mbit(icwc, q) - pooled_percentile_mbit(other, q);
      const Real se = paired(icwc, other, percentile_mbit(q)).second;
      ok = ok && margin > se;
      detail += fmt(", -%s %+.3g (SE %.2g)", to_string(a).c_str(), margin, se);
    }
    detail += fmt(" [q=0.95: ICWC %.2f CWC %.2f OSCBC %.2f]; ", pooled_percentile_mbit(icwc, 0.95),
                  pooled_percentile_mbit(sw.at(Algorithm::CWC, z), 0.95),
                  pooled_percentile_mbit(sw.at(Algorithm::OSCBC, z), 0.95));
  }
  return {ok, detail + "Mbit/slot, q=0.05"};
}

Verdict c7_quantization(const ExperimentConfig& base) {
  ExperimentConfig c = base;
  c.phase_bits = {0, 1, 2};
  c.algorithms = {Algorithm::CWC};
  c.z_values = {kK};
  const Sweep sw(c);
  const Real u = mean_cbar(sw.at(Algorithm::CWC, kK, 0));
  const Real b2 = mean_cbar(sw.at(Algorithm::CWC, kK, 2));
  const Real b1 = mean_cbar(sw.at(Algorithm::CWC, kK, 1));
  const Real loss1 = 1 - b1 / u, loss2 = 1 - b2 / u;
  const bool ok = sw.result().complete() && u > b2 && b2 > b1 && loss1 >= 0.15 && loss1 <= 0.35 && loss2 <= 0.10;
  return {ok, fmt("C at Z=K: continuous %.2f, b=2 %.2f, b=1 %.2f Mbit/slot; loss b=1 %.3f ([0.15, 0.35]), b=2 %.3f "
                  "(<= 0.10)",
                  u, b2, b1, loss1, loss2)};
}

Verdict c8_zmin(const ExperimentConfig& base) {
  bool ok = true;
  std::string detail;
  const std::size_t seeds = 20;
  for (std::size_t k : {std::size_t{20}, std::size_t{40}}) {
    ExperimentConfig c = base;
    c.num_ues = {k};
    const ScenarioPoint sc{k, c.irs.front(), 0, ChannelMode::pLoS};
    const ProfileCache cache = ProfileCache::resolve(c.cache_dir);
    Real total = 0;
    std::size_t missed = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const std::uint64_t seed = derive_seed(c.master_seed, s);
      const std::vector<UeProfile> one{realization_profile(c, sc, seed, cache)};
      const ZMinResult r = find_z_min(one, c.clustering(Algorithm::CWC, 1, derive_seed(seed, 3)), 0.8, c.radio());
      total += static_cast<Real>(r.z_min);
      missed += !r.reached;
    }
    const Real mean = total / static_cast<Real>(seeds);
    ok = ok && mean <= 0.55 * static_cast<Real>(k);
    detail += fmt("K=%zu: mean Z_min %.2f (<= %.1f)%s; ", k, mean, 0.55 * static_cast<Real>(k),
                  missed ? fmt(", %zu seeds missed the target", missed).c_str() : "");
  }
  return {ok, detail + "CWC, 80% of unclustered"};
}

Verdict c9_los() {
  const std::size_t n = 100000;
  const auto geom = sample_geometry(derive_seed(1, 9), n, 167, Point2(0, 0), Point2(75, 100));
  Real s = 0;
  for (const auto& p : geom.ue_positions) s += los_probability((p - geom.irs_position).norm());
  const Real half = s / static_cast<Real>(n);
  const auto full = sample_geometry(derive_seed(1, 9), n, 167, Point2(0, 0), Point2(75, 100), false);
  Real f = 0;
  for (const auto& p : full.ue_positions) f += los_probability((p - full.irs_position).norm());
  return {std::abs(half - 0.35) <= 0.02,
          fmt("mean LoS probability %.4f over %zu UEs (target 0.35 +- 0.02); full disk gives %.4f", half, n,
              f / static_cast<Real>(n))};
}

Verdict c10_modes(const ExperimentConfig& base) {
  ExperimentConfig c = base;
  c.channel_modes = {ChannelMode::dLoS, ChannelMode::pLoS, ChannelMode::NLoS};
  c.algorithms = {Algorithm::CWC};
  c.z_values = {kK / 2};
  const Sweep sw(c);
  const PointData d = sw.at(Algorithm::CWC, kK / 2, 0, ChannelMode::dLoS);
  const PointData p = sw.at(Algorithm::CWC, kK / 2, 0, ChannelMode::pLoS);
  const PointData nl = sw.at(Algorithm::CWC, kK / 2, 0, ChannelMode::NLoS);
  const auto [dp, se_dp] = paired(d, p, cbar_mbit);
  const auto [pn, se_pn] = paired(p, nl, cbar_mbit);
  const Real ratio = mean_cbar(d) / mean_cbar(p);
  const bool ok = sw.result().complete() && dp > se_dp && pn > se_pn && ratio >= 1.5;
  return {ok, fmt("CWC Z=%zu: dLoS %.2f, pLoS %.2f, NLoS %.2f Mbit/slot; gaps %.2f (SE %.2f), %.2f (SE %.2f); "
                  "dLoS/pLoS %.3f (>= 1.5)",
                  kK / 2, mean_cbar(d), mean_cbar(p), mean_cbar(nl), dp, se_dp, pn, se_pn, ratio)};
}

Verdict c11_properties() {
  const std::vector<std::pair<const char*, props::Outcome>> suites{
      {"metric", props::metric_axioms(10000, 11)},
      {"quantization", props::quantization_bound(10000, 12)},
      {"partition", props::partition_laws(1000, 13)},
      {"svd", props::svd_reconstruction(1000, 14)},
      {"monotone", props::alg1_monotonicity(200, 15)},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, o] : suites) {
    ok = ok && o.ok;
    detail += fmt("%s %s (%zu cases)%s; ", name, o.ok ? "ok" : "VIOLATED", o.cases,
                  o.ok ? "" : (": " + o.detail).c_str());
  }
  return {ok, detail};
}

}  // namespace

int main() {
  int unexpected = 0;
  auto report = [&](int id, const char* title, const std::function<Verdict()>& run) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const bool known = kKnownRed.count(id) > 0;
    std::printf("%s C%-2d %s: %s [%.1f s]%s\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(),
                seconds_since(t0), known ? (v.pass ? " (expected FAIL)" : " (known)") : "");
    std::fflush(stdout);
    if (v.pass == known) ++unexpected;
  };

  const ExperimentConfig desk = desk_config();
  std::printf("# desk scale: K=%zu, gNB 4x4, UE 1x2, IRS 16x8, %.2f dBm, %zu realizations, cache %s\n", kK,
              desk.tx_power_dbm, kRealizations, desk.cache_dir.c_str());

  report(1, "unclustered equivalence at Z=K", c1_equivalence);
  report(2, "per-UE optimiser vs exhaustive search", c2_oracle);
  report(3, "per-UE optimiser convergence", c3_convergence);

  std::unique_ptr<Sweep> fig2;
  const auto t0 = Clock::now();
  try {
    fig2 = std::make_unique<Sweep>(desk);
  } catch (const std::exception& e) {
    std::printf("# Z sweep failed: %s\n", e.what());
  }
  std::printf("# Z sweep: %zu points in %.1f s\n", fig2 ? fig2->result().rows.size() : 0, seconds_since(t0));
  auto need_sweep = [&](auto&& f) {
    return [&, f]() -> Verdict {
      if (!fig2 || !fig2->result().complete()) return {false, "Z sweep incomplete"};
      return f(*fig2);
    };
  };
  report(4, "monotone trend in Z", need_sweep([&](const Sweep& s) { return c4_trend(s, desk); }));
  report(5, "algorithm ordering", need_sweep([](const Sweep& s) { return c5_ordering(s); }));
  report(6, "fairness ordering", need_sweep([](const Sweep& s) { return c6_fairness(s); }));
  report(7, "quantization degradation", [&] { return c7_quantization(desk); });
  report(8, "reconfiguration halving", [&] { return c8_zmin(desk); });
  report(9, "LoS probability calibration", c9_los);
  report(10, "channel-mode ordering", [&] { return c10_modes(desk); });
  report(11, "property suites", c11_properties);

  std::printf("# %d unexpected result(s); known-red criteria:", unexpected);
  for (int id : kKnownRed) std::printf(" C%d", id);
  std::printf("\n");
  return unexpected == 0 ? 0 : 1;
}
