// SPDX-License-Identifier: Apache-2.0
#include "irs/channel.hpp"

#include <algorithm>
#include <cmath>

#include "irs/core.hpp"
#include "irs/errors.hpp"

namespace irs {

namespace {

constexpr Real kSpeedOfLight = 299792458.0;

Real azimuth_of(const Point2& from, const Point2& to) {
  const Point2 d = to - from;
  return std::atan2(d.y(), d.x());
}

/// Carrier phase of a path of length d, reduced before scaling to keep precision.
Real propagation_phase(Real d, Real fc_ghz) {
  const Real wavelengths = d * fc_ghz * 1e9 / kSpeedOfLight;
  return -kTwoPi * (wavelengths - std::floor(wavelengths));
}

}  // namespace

CVector AntennaArray::response(Real azimuth, Real boresight) const {
  const Real k = kTwoPi * element_spacing * std::sin(azimuth - boresight);
  CVector row(cols_h);
  for (int h = 0; h < cols_h; ++h) row(h) = std::polar(1.0, k * h);
  CVector out(size());
  for (int v = 0; v < rows_v; ++v) out.segment(static_cast<Eigen::Index>(v) * cols_h, cols_h) = row;
  return out;
}

void AntennaArray::validate(std::string_view name) const {
  detail::require(rows_v >= 1 && cols_h >= 1,
                  std::string(name) + ": array needs at least one row and one column");
  detail::require(element_spacing > 0, std::string(name) + ": element spacing must be positive");
}

std::string to_string(ChannelMode mode) {
  switch (mode) {
    case ChannelMode::dLoS: return "dLoS";
    case ChannelMode::NLoS: return "NLoS";
    case ChannelMode::pLoS: return "pLoS";
  }
  return "?";
}

ChannelMode parse_channel_mode(std::string_view text) {
  if (text == "dLoS" || text == "dlos" || text == "LoS") return ChannelMode::dLoS;
  if (text == "NLoS" || text == "nlos") return ChannelMode::NLoS;
  if (text == "pLoS" || text == "plos") return ChannelMode::pLoS;
  throw ContractViolation("unknown channel mode '" + std::string(text) + "' (expected dLoS, NLoS or pLoS)");
}

ScenarioGeometry sample_geometry(std::uint64_t seed, std::size_t k, Real radius,
                                 const Point2& gnb, const Point2& irs, bool half_plane) {
  detail::require(k >= 1, "sample_geometry: need at least one UE");
  detail::require(radius > 0, "sample_geometry: radius must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  const Real lo = half_plane ? -kPi / 2 : -kPi;
  const Real span = half_plane ? kPi : kTwoPi;

  ScenarioGeometry geom{gnb, irs, radius, {}};
  geom.ue_positions.reserve(k);
  while (geom.ue_positions.size() < k) {
    const Real r = radius * std::sqrt(unit(rng));
    const Real a = lo + span * unit(rng);
    Point2 p = gnb + Point2(r * std::cos(a), r * std::sin(a));
    if (p == irs) continue;
    geom.ue_positions.push_back(p);
  }
  return geom;
}

Real los_probability(Real d) {
  detail::require(d >= 0, "los_probability: negative distance");
  if (d <= 18.0) return 1.0;
  return 18.0 / d + (1.0 - 18.0 / d) * std::exp(-d / 36.0);
}

bool sample_link_state(std::mt19937_64& rng, ChannelMode mode, Real d) {
  switch (mode) {
    case ChannelMode::dLoS: return true;
    case ChannelMode::NLoS: return false;
    case ChannelMode::pLoS: {
      std::bernoulli_distribution draw(los_probability(d));
      return draw(rng);
    }
  }
  return false;
}

bool sample_link_state(std::uint64_t seed, ChannelMode mode, Real d) {
  std::mt19937_64 rng(seed);
  return sample_link_state(rng, mode, d);
}

Real path_loss_db(Real d, Real fc_ghz, bool los) {
  detail::require(d >= 1.0, "path_loss_db: distance below 1 m is outside the model");
  detail::require(fc_ghz >= 0.5 && fc_ghz <= 100.0, "path_loss_db: carrier outside [0.5, 100] GHz");
  const Real pl_los = 32.4 + 21.0 * std::log10(d) + 20.0 * std::log10(fc_ghz);
  if (los) return pl_los;
  const Real pl_nlos = 35.3 * std::log10(d) + 22.4 + 21.3 * std::log10(fc_ghz);
  return std::max(pl_los, pl_nlos);
}

ChannelRealization synthesize_channel(std::uint64_t seed, const ScenarioGeometry& geom,
                                      const ChannelScenario& sc) {
  sc.gnb.validate("gnb");
  sc.irs.validate("irs");
  sc.ue.validate("ue");
  const auto& cm = sc.clusters;
  detail::require(cm.los_clusters >= 1 && cm.los_rays >= 1 && cm.nlos_clusters >= 1 && cm.nlos_rays >= 1,
                  "synthesize_channel: cluster and ray counts must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  std::normal_distribution<Real> offset(0.0, cm.ray_spread_deg * kPi / 180.0);

  ChannelRealization out;

  // gNB -> IRS: a single deterministic LoS path.
  {
    const Real d = (geom.irs_position - geom.gnb_position).norm();
    const Real gain = std::pow(10.0, -path_loss_db(std::max(d, 1.0), sc.carrier_ghz, true) / 20.0);
    const Real depart = azimuth_of(geom.gnb_position, geom.irs_position);
    const CVector a_g = sc.gnb.response(depart, sc.gnb_boresight_rad);
    const CVector a_i = sc.irs.response(depart + kPi, sc.irs_boresight_rad);
    out.lsfc_gnb_irs = gain;
    out.h = (gain * std::polar(1.0, propagation_phase(d, sc.carrier_ghz))) * a_i * a_g.transpose();
  }

  const Real rician = std::pow(10.0, cm.rician_k_db / 10.0);
  const std::size_t k = geom.num_ues();
  out.g.reserve(k);
  out.link_los.reserve(k);
  out.lsfc.reserve(k);

  for (std::size_t u = 0; u < k; ++u) {
    const Point2& ue = geom.ue_positions[u];
    const Real d = (ue - geom.irs_position).norm();
    const bool los = sample_link_state(rng, sc.mode, d);
    const Real gain = std::pow(10.0, -path_loss_db(std::max(d, 1.0), sc.carrier_ghz, los) / 20.0);
    const Real ue_boresight = -kPi + kTwoPi * unit(rng);

    const int clusters = los ? cm.los_clusters : cm.nlos_clusters;
    const int rays = los ? cm.los_rays : cm.nlos_rays;
    const Real diffuse_share = los ? 1.0 / (1.0 + rician) : 1.0;

    std::vector<Real> power(static_cast<std::size_t>(clusters));
    for (auto& p : power) p = -std::log(1.0 - unit(rng));
    Real total = 0;
    for (Real p : power) total += p;

    CMatrix g = CMatrix::Zero(sc.ue.size(), sc.irs.size());
    for (int n = 0; n < clusters; ++n) {
      const Real depart_c = sc.irs_boresight_rad - kPi / 2 + kPi * unit(rng);
      const Real arrive_c = -kPi + kTwoPi * unit(rng);
      const Real amp = std::sqrt(diffuse_share * power[static_cast<std::size_t>(n)] / total / rays);
      for (int m = 0; m < rays; ++m) {
        const Real depart = wrap_phase(depart_c + offset(rng));
        const Real arrive = wrap_phase(arrive_c + offset(rng));
        const Complex coeff = std::polar(amp, kTwoPi * unit(rng));
        g.noalias() += (coeff * sc.ue.response(arrive, ue_boresight)) *
                       sc.irs.response(depart, sc.irs_boresight_rad).transpose();
      }
    }
    if (los) {
      const Real depart = azimuth_of(geom.irs_position, ue);
      const Complex coeff =
          std::polar(std::sqrt(rician / (1.0 + rician)), propagation_phase(d, sc.carrier_ghz));
      g.noalias() += (coeff * sc.ue.response(depart + kPi, ue_boresight)) *
                     sc.irs.response(depart, sc.irs_boresight_rad).transpose();
    }
    g *= gain;

    out.g.push_back(std::move(g));
    out.link_los.push_back(los);
    out.lsfc.push_back(gain);
  }
  return out;
}

}  // namespace irs
