// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_CHANNEL_HPP
#define IRS_CHANNEL_HPP

// Scenario geometry and stochastic clustered-ray channels for the
// gNB -> IRS -> UE downlink. Everything lives on a 2D plane; elevation is
// broadside, so only the horizontal element index contributes to the array
// phase.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "irs/types.hpp"

namespace irs {

using Point2 = Eigen::Vector2d;

struct ScenarioGeometry {
  Point2 gnb_position = Point2::Zero();
  Point2 irs_position = Point2(75.0, 100.0);
  Real cell_radius = 167.0;
  std::vector<Point2> ue_positions;

  std::size_t num_ues() const { return ue_positions.size(); }
};

/// Uniform planar array of rows_v x cols_h elements; spacing in wavelengths.
struct AntennaArray {
  int rows_v = 1;
  int cols_h = 1;
  Real element_spacing = 0.5;

  Eigen::Index size() const { return static_cast<Eigen::Index>(rows_v) * cols_h; }

  /// Planar-wave response for a wave leaving/arriving at global azimuth
  /// `azimuth`, array facing `boresight`. Element (v, h) sits at index v*cols_h + h.
  CVector response(Real azimuth, Real boresight) const;
  void validate(std::string_view name) const;
};

enum class ChannelMode { dLoS, NLoS, pLoS };

std::string to_string(ChannelMode mode);
ChannelMode parse_channel_mode(std::string_view text);

/// Cluster/ray counts and spreads of the IRS -> UE link.
struct ClusterModel {
  int los_clusters = 12;
  int los_rays = 20;
  int nlos_clusters = 19;
  int nlos_rays = 20;
  Real rician_k_db = 9.0;       // specular-to-diffuse power ratio on LoS links
  Real ray_spread_deg = 5.0;    // per-ray angular offset std-dev
};

struct ChannelScenario {
  AntennaArray gnb{8, 8};
  AntennaArray irs{80, 40};
  AntennaArray ue{1, 2};
  Real carrier_ghz = 28.0;
  ChannelMode mode = ChannelMode::pLoS;
  ClusterModel clusters;
  Real gnb_boresight_rad = 0.0;
  Real irs_boresight_rad = -kPi / 2;
};

struct ChannelRealization {
  CMatrix h;                    // N_I x N_g, gNB -> IRS
  std::vector<CMatrix> g;       // per UE, N_U x N_I, IRS -> UE
  std::vector<bool> link_los;   // per UE
  std::vector<Real> lsfc;       // per UE amplitude gain, linear
  Real lsfc_gnb_irs = 0;        // amplitude gain of the gNB -> IRS link

  std::size_t num_ues() const { return g.size(); }
};

/// K UEs i.i.d. uniform over the disk (or its x >= 0 half when half_plane) around the gNB.
ScenarioGeometry sample_geometry(std::uint64_t seed, std::size_t k, Real radius,
                                 const Point2& gnb, const Point2& irs, bool half_plane = true);

/// UMi LoS probability between the IRS and a UE at distance d metres.
Real los_probability(Real d);

bool sample_link_state(std::mt19937_64& rng, ChannelMode mode, Real d);
bool sample_link_state(std::uint64_t seed, ChannelMode mode, Real d);

/// UMi street-canyon path loss in dB, shadowing disabled. d in metres (>= 1), fc in GHz.
Real path_loss_db(Real d, Real fc_ghz, bool los);

ChannelRealization synthesize_channel(std::uint64_t seed, const ScenarioGeometry& geom,
                                      const ChannelScenario& scenario);

}  // namespace irs

#endif  // IRS_CHANNEL_HPP
