// SPDX-License-Identifier: Apache-2.0
#include "irs/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

namespace irs::harness {

using nlohmann::json;

namespace {

/// A JSON object plus its path; tracks which keys were consumed so leftovers can be reported.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    out = convert<T>(at(key), child(key));
  }

  template <typename T>
  void read_list(const std::string& key, std::vector<T>& out) {
    if (!has(key)) return;
    const json& a = at(key);
    const std::string p = child(key);
    if (!a.is_array()) throw ConfigError(p, "expected an array");
    std::vector<T> v;
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(convert<T>(a[i], p + "[" + std::to_string(i) + "]"));
    out = std::move(v);
  }

  Node object(const std::string& key) { return Node(at(key), child(key)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(child(it.key()), "unknown key");
  }

  template <typename T>
  static T convert(const json& v, const std::string& p) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(p, "expected true or false");
      return v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(p, "expected an integer");
      if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
        throw ConfigError(p, "expected a non-negative integer");
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(p, "expected a number");
      return v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(p, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, Point2>) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(p, "expected [x, y] in metres");
      return Point2(v[0].get<Real>(), v[1].get<Real>());
    } else if constexpr (std::is_same_v<T, ChannelMode>) {
      try {
        return parse_channel_mode(convert<std::string>(v, p));
      } catch (const ConfigError&) {
        throw;
      } catch (const ContractViolation& e) {
        throw ConfigError(p, e.what());
      }
    } else if constexpr (std::is_same_v<T, Algorithm>) {
      try {
        return parse_algorithm(convert<std::string>(v, p));
      } catch (const ConfigError&) {
        throw;
      } catch (const ContractViolation& e) {
        throw ConfigError(p, e.what());
      }
    } else if constexpr (std::is_same_v<T, AntennaArray>) {
      Node n(v, p);
      AntennaArray a;
      n.read("rows_v", a.rows_v);
      n.read("cols_h", a.cols_h);
      n.read("spacing", a.element_spacing);
      n.finish();
      return a;
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void check(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

void check_array(const AntennaArray& a, const std::string& path) {
  check(a.rows_v >= 1, path + ".rows_v", "must be at least 1");
  check(a.cols_h >= 1, path + ".cols_h", "must be at least 1");
  check(a.element_spacing > 0, path + ".spacing", "must be positive");
}

json array_json(const AntennaArray& a) {
  return json{{"rows_v", a.rows_v}, {"cols_h", a.cols_h}, {"spacing", a.element_spacing}};
}

}  // namespace

void ExperimentConfig::validate() const {
  check(cell_radius_m > 0, "geometry.cell_radius_m", "must be positive");
  check(!num_ues.empty(), "num_ues", "must not be empty");
  for (std::size_t i = 0; i < num_ues.size(); ++i)
    check(num_ues[i] >= 1, "num_ues[" + std::to_string(i) + "]", "must be at least 1");

  check_array(gnb, "arrays.gnb");
  check_array(ue, "arrays.ue");
  check(!irs.empty(), "arrays.irs", "must not be empty");
  for (std::size_t i = 0; i < irs.size(); ++i) check_array(irs[i], "arrays.irs[" + std::to_string(i) + "]");

  check(carrier_ghz >= 0.5 && carrier_ghz <= 100, "radio.carrier_ghz", "must lie in [0.5, 100]");
  check(bandwidth_hz > 0, "radio.bandwidth_hz", "must be positive");
  check(std::isfinite(tx_power_dbm), "radio.tx_power_dbm", "must be finite");
  check(std::isfinite(noise_psd_dbm_per_hz), "radio.noise_psd_dbm_per_hz", "must be finite");

  check(!channel_modes.empty(), "channel.modes", "must not be empty");
  check(clusters.los_clusters >= 1, "channel.los_clusters", "must be at least 1");
  check(clusters.los_rays >= 1, "channel.los_rays", "must be at least 1");
  check(clusters.nlos_clusters >= 1, "channel.nlos_clusters", "must be at least 1");
  check(clusters.nlos_rays >= 1, "channel.nlos_rays", "must be at least 1");
  check(clusters.ray_spread_deg >= 0, "channel.ray_spread_deg", "must be non-negative");

  check(!phase_bits.empty(), "phase_bits", "must not be empty");
  for (std::size_t i = 0; i < phase_bits.size(); ++i)
    check(phase_bits[i] >= 0 && phase_bits[i] <= 16, "phase_bits[" + std::to_string(i) + "]",
          "must be 0 (continuous) or 1..16");

  check(optimizer.epsilon > 0, "optimizer.epsilon", "must be positive");
  check(optimizer.max_iterations >= 1, "optimizer.max_iterations", "must be at least 1");

  check(!algorithms.empty(), "clustering.algorithms", "must not be empty");
  check(z_values.empty() != z_fractions.empty(), "clustering",
        "give exactly one of z_values and z_fractions");
  for (std::size_t i = 0; i < z_values.size(); ++i) {
    const std::string p = "clustering.z_values[" + std::to_string(i) + "]";
    check(z_values[i] >= 1, p, "must be at least 1");
    for (auto k : num_ues) check(z_values[i] <= k, p, "exceeds K = " + std::to_string(k));
  }
  for (std::size_t i = 0; i < z_fractions.size(); ++i)
    check(z_fractions[i] > 0 && z_fractions[i] <= 1, "clustering.z_fractions[" + std::to_string(i) + "]",
          "must lie in (0, 1]");
  check(mu > 0, "clustering.mu", "must be positive");
  check(km_max_iterations >= 1, "clustering.km_max_iterations", "must be at least 1");
  check(cwc_max_iterations >= 1, "clustering.cwc_max_iterations", "must be at least 1");

  check(realizations >= 1, "monte_carlo.realizations", "must be at least 1");
  check(percentile_q > 0 && percentile_q < 1, "monte_carlo.percentile_q", "must lie in (0, 1)");
}

std::vector<std::size_t> ExperimentConfig::z_grid(std::size_t k) const {
  std::vector<std::size_t> out = z_values;
  for (Real f : z_fractions)
    out.push_back(std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(f * static_cast<Real>(k))), 1, k));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RadioParams ExperimentConfig::radio() const {
  return RadioParams::from_dbm(bandwidth_hz, tx_power_dbm, noise_psd_dbm_per_hz);
}

ChannelScenario ExperimentConfig::scenario(const AntennaArray& irs_array, ChannelMode mode) const {
  ChannelScenario s;
  s.gnb = gnb;
  s.irs = irs_array;
  s.ue = ue;
  s.carrier_ghz = carrier_ghz;
  s.mode = mode;
  s.clusters = clusters;
  return s;
}

ClusteringSettings ExperimentConfig::clustering(Algorithm algorithm, std::size_t z, std::uint64_t seed) const {
  ClusteringSettings s;
  s.algorithm = algorithm;
  s.z_max = z;
  s.mu = mu;
  s.km_max_iterations = km_max_iterations;
  s.cwc_max_iterations = cwc_max_iterations;
  s.seed = seed;
  return s;
}

Real desk_tx_power_dbm(Eigen::Index n_gnb, Eigen::Index n_irs) {
  detail::require(n_gnb >= 1 && n_irs >= 1, "desk_tx_power_dbm: array sizes must be positive");
  const Real ref = 64.0 * 3200.0 * 3200.0;
  const Real here = static_cast<Real>(n_gnb) * static_cast<Real>(n_irs) * static_cast<Real>(n_irs);
  return 33.0 + 10.0 * std::log10(ref / here);
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig c;
  Node root(doc, "");

  if (root.has("geometry")) {
    Node g = root.object("geometry");
    g.read("cell_radius_m", c.cell_radius_m);
    g.read("gnb_position_m", c.gnb_position_m);
    g.read("irs_position_m", c.irs_position_m);
    g.finish();
  }
  root.read_list("num_ues", c.num_ues);

  if (root.has("arrays")) {
    Node a = root.object("arrays");
    a.read("gnb", c.gnb);
    a.read("ue", c.ue);
    a.read_list("irs", c.irs);
    a.finish();
  }

  if (root.has("radio")) {
    Node r = root.object("radio");
    r.read("carrier_ghz", c.carrier_ghz);
    r.read("bandwidth_hz", c.bandwidth_hz);
    r.read("tx_power_dbm", c.tx_power_dbm);
    r.read("noise_psd_dbm_per_hz", c.noise_psd_dbm_per_hz);
    r.finish();
  }

  if (root.has("channel")) {
    Node ch = root.object("channel");
    ch.read_list("modes", c.channel_modes);
    ch.read("los_clusters", c.clusters.los_clusters);
    ch.read("los_rays", c.clusters.los_rays);
    ch.read("nlos_clusters", c.clusters.nlos_clusters);
    ch.read("nlos_rays", c.clusters.nlos_rays);
    ch.read("rician_k_db", c.clusters.rician_k_db);
    ch.read("ray_spread_deg", c.clusters.ray_spread_deg);
    ch.finish();
  }

  root.read_list("phase_bits", c.phase_bits);

  if (root.has("optimizer")) {
    Node o = root.object("optimizer");
    o.read("epsilon", c.optimizer.epsilon);
    o.read("max_iterations", c.optimizer.max_iterations);
    o.finish();
  }

  if (root.has("clustering")) {
    Node cl = root.object("clustering");
    cl.read_list("algorithms", c.algorithms);
    if (cl.has("z_values") && cl.has("z_fractions"))
      throw ConfigError("clustering", "give exactly one of z_values and z_fractions");
    if (cl.has("z_values")) {
      cl.read_list("z_values", c.z_values);
      c.z_fractions.clear();
    }
    if (cl.has("z_fractions")) {
      cl.read_list("z_fractions", c.z_fractions);
      c.z_values.clear();
    }
    cl.read("mu", c.mu);
    cl.read("km_max_iterations", c.km_max_iterations);
    cl.read("cwc_max_iterations", c.cwc_max_iterations);
    cl.finish();
  }

  if (root.has("monte_carlo")) {
    Node m = root.object("monte_carlo");
    m.read("realizations", c.realizations);
    m.read("master_seed", c.master_seed);
    m.read("percentile_q", c.percentile_q);
    m.read("threads", c.threads);
    m.finish();
  }

  root.read("cache_dir", c.cache_dir);
  root.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string(), "cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string(), std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json irs = json::array();
  for (const auto& a : c.irs) irs.push_back(array_json(a));
  json modes = json::array();
  for (auto m : c.channel_modes) modes.push_back(to_string(m));
  json algs = json::array();
  for (auto a : c.algorithms) algs.push_back(to_string(a));

  json clustering{{"algorithms", algs},
                  {"mu", c.mu},
                  {"km_max_iterations", c.km_max_iterations},
                  {"cwc_max_iterations", c.cwc_max_iterations}};
  if (!c.z_values.empty())
    clustering["z_values"] = c.z_values;
  else
    clustering["z_fractions"] = c.z_fractions;

  return json{
      {"geometry",
       {{"cell_radius_m", c.cell_radius_m},
        {"gnb_position_m", {c.gnb_position_m.x(), c.gnb_position_m.y()}},
        {"irs_position_m", {c.irs_position_m.x(), c.irs_position_m.y()}}}},
      {"num_ues", c.num_ues},
      {"arrays", {{"gnb", array_json(c.gnb)}, {"ue", array_json(c.ue)}, {"irs", irs}}},
      {"radio",
       {{"carrier_ghz", c.carrier_ghz},
        {"bandwidth_hz", c.bandwidth_hz},
        {"tx_power_dbm", c.tx_power_dbm},
        {"noise_psd_dbm_per_hz", c.noise_psd_dbm_per_hz}}},
      {"channel",
       {{"modes", modes},
        {"los_clusters", c.clusters.los_clusters},
        {"los_rays", c.clusters.los_rays},
        {"nlos_clusters", c.clusters.nlos_clusters},
        {"nlos_rays", c.clusters.nlos_rays},
        {"rician_k_db", c.clusters.rician_k_db},
        {"ray_spread_deg", c.clusters.ray_spread_deg}}},
      {"phase_bits", c.phase_bits},
      {"optimizer", {{"epsilon", c.optimizer.epsilon}, {"max_iterations", c.optimizer.max_iterations}}},
      {"clustering", clustering},
      {"monte_carlo",
       {{"realizations", c.realizations},
        {"master_seed", c.master_seed},
        {"percentile_q", c.percentile_q},
        {"threads", c.threads}}},
      {"cache_dir", c.cache_dir}};
}

}  // namespace irs::harness
