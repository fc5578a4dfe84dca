// SPDX-License-Identifier: Apache-2.0
#include "irs/harness/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "irs/errors.hpp"

namespace irs::harness {

namespace {

constexpr char kMagic[8] = {'I', 'R', 'S', 'O', 'P', 'T', '0', '1'};

std::string hexfloat(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

std::string array_text(const AntennaArray& a) {
  return std::to_string(a.rows_v) + "x" + std::to_string(a.cols_h) + "@" + hexfloat(a.element_spacing);
}

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  template <typename T>
  void pod(const T& v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  void size(std::size_t n) { pod(static_cast<std::uint64_t>(n)); }
  void reals(const Real* p, std::size_t n) {
    size(n);
    out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(Real)));
  }
  void complexes(const CVector& v) {
    size(static_cast<std::size_t>(v.size()));
    out_.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(Complex)));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  template <typename T>
  T pod() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
  }
  std::size_t size(std::size_t limit) {
    const auto n = pod<std::uint64_t>();
    if (!in_ || n > limit) ok_ = false;
    return ok_ ? static_cast<std::size_t>(n) : 0;
  }
  std::vector<Real> reals(std::size_t limit) {
    std::vector<Real> v(size(limit));
    in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(Real)));
    return v;
  }
  CVector complexes(std::size_t limit) {
    CVector v(static_cast<Eigen::Index>(size(limit)));
    in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(Complex)));
    return v;
  }
  bool ok() const { return ok_ && static_cast<bool>(in_); }

 private:
  std::istream& in_;
  bool ok_ = true;
};

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ProfileKey::description() const {
  const ClusterModel& c = scenario.clusters;
  std::ostringstream s;
  s << "irs-sched-profile v1"
    << ";geometry_seed=" << geometry_seed << ";channel_seed=" << channel_seed << ";K=" << num_ues
    << ";radius=" << hexfloat(cell_radius_m) << ";gnb_pos=" << hexfloat(gnb_position_m.x()) << ","
    << hexfloat(gnb_position_m.y()) << ";irs_pos=" << hexfloat(irs_position_m.x()) << ","
    << hexfloat(irs_position_m.y()) << ";gnb=" << array_text(scenario.gnb) << ";irs=" << array_text(scenario.irs)
    << ";ue=" << array_text(scenario.ue) << ";fc=" << hexfloat(scenario.carrier_ghz)
    << ";mode=" << to_string(scenario.mode) << ";clusters=" << c.los_clusters << "/" << c.los_rays << "/"
    << c.nlos_clusters << "/" << c.nlos_rays << "/" << hexfloat(c.rician_k_db) << "/" << hexfloat(c.ray_spread_deg)
    << ";boresight=" << hexfloat(scenario.gnb_boresight_rad) << "," << hexfloat(scenario.irs_boresight_rad)
    << ";bits=" << phase_bits << ";eps=" << hexfloat(optimizer.epsilon) << ";iters=" << optimizer.max_iterations
    << ";tx=" << hexfloat(tx_power_dbm) << ";n0=" << hexfloat(noise_psd_dbm_per_hz)
    << ";B=" << hexfloat(bandwidth_hz);
  return s.str();
}

std::string ProfileKey::file_stem() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(description())));
  return buf;
}

ProfileCache::ProfileCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

ProfileCache ProfileCache::resolve(const std::string& configured) {
  if (const char* env = std::getenv(kCacheDirEnv); env && *env) return ProfileCache(env);
  if (!configured.empty()) return ProfileCache(configured);
  return ProfileCache();
}

std::filesystem::path ProfileCache::file_for(const ProfileKey& key) const {
  return dir_ / (key.file_stem() + ".bin");
}

std::optional<std::vector<PerUeOptimum>> ProfileCache::load(const ProfileKey& key) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(file_for(key), std::ios::binary);
  if (!in) return std::nullopt;

  Reader r(in);
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::string_view(magic, sizeof magic) != std::string_view(kMagic, sizeof kMagic)) return std::nullopt;

  const std::string want = key.description();
  const std::size_t len = r.size(1 << 16);
  std::string have(len, '\0');
  in.read(have.data(), static_cast<std::streamsize>(len));
  if (!r.ok() || have != want) return std::nullopt;

  constexpr std::size_t kLimit = std::size_t{1} << 28;
  std::vector<PerUeOptimum> out(r.size(1 << 24));
  for (auto& o : out) {
    auto theta = r.reals(kLimit);
    if (!r.ok()) return std::nullopt;
    o.config.phases = PhaseVector(Eigen::Map<const RVector>(theta.data(), static_cast<Eigen::Index>(theta.size())));
    o.beamformers.w = r.complexes(kLimit);
    o.beamformers.v = r.complexes(kLimit);
    o.achievable_rate = r.pod<Real>();
    o.iterations_used = r.pod<std::int32_t>();
    o.converged = r.pod<std::uint8_t>() != 0;
    o.rate_history = r.reals(kLimit);
    if (!r.ok()) return std::nullopt;
  }
  if (out.size() != key.num_ues) return std::nullopt;
  return out;
}

void ProfileCache::store(const ProfileKey& key, const std::vector<PerUeOptimum>& optima) const {
  if (!enabled()) return;
  std::filesystem::create_directories(dir_);
  const auto final_path = file_for(key);
  std::ostringstream suffix;
  suffix << ".tmp." << ::getpid() << "." << std::this_thread::get_id();
  const auto tmp = std::filesystem::path(final_path.string() + suffix.str());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
    Writer w(out);
    out.write(kMagic, sizeof kMagic);
    const std::string d = key.description();
    w.size(d.size());
    out.write(d.data(), static_cast<std::streamsize>(d.size()));
    w.size(optima.size());
    for (const auto& o : optima) {
      const RVector& t = o.config.phases.theta();
      w.reals(t.data(), static_cast<std::size_t>(t.size()));
      w.complexes(o.beamformers.w);
      w.complexes(o.beamformers.v);
      w.pod(o.achievable_rate);
      w.pod(static_cast<std::int32_t>(o.iterations_used));
      w.pod(static_cast<std::uint8_t>(o.converged ? 1 : 0));
      w.reals(o.rate_history.data(), o.rate_history.size());
    }
    out.flush();
    if (!out) throw std::runtime_error("cache: short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, final_path);
}

}  // namespace irs::harness
