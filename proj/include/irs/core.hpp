// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_CORE_HPP
#define IRS_CORE_HPP

// IRS configuration algebra: phase sets, phase vectors, link SNR and rate.

#include <cstddef>
#include <span>
#include <vector>

#include "irs/types.hpp"

namespace irs {

/// Feasible per-element phase shifts: either the whole circle or a uniform
/// grid of 2^b values {2*pi*m / 2^b}.
class PhaseSet {
 public:
  static PhaseSet continuous() { return PhaseSet(0); }
  static PhaseSet quantized(int bits);

  bool is_continuous() const { return bits_ == 0; }
  int bits() const { return bits_; }
  std::size_t levels() const { return std::size_t{1} << bits_; }
  Real step() const { return kTwoPi / static_cast<Real>(levels()); }

  /// Grid value of index m, wrapped into [-pi, pi).
  Real grid_value(std::size_t m) const;

  bool operator==(const PhaseSet&) const = default;

 private:
  explicit PhaseSet(int bits) : bits_(bits) {}
  int bits_ = 0;
};

/// Wrap any finite angle into [-pi, pi).
Real wrap_phase(Real x);

/// Nearest feasible phase in angular distance; ties go to the smaller grid index.
Real quantize_phase(Real theta, const PhaseSet& set);

/// A point of [-pi, pi)^N. Entries are wrapped on construction.
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(RVector theta);
  static PhaseVector zeros(Eigen::Index n) { return PhaseVector(RVector::Zero(n)); }

  const RVector& theta() const { return theta_; }
  Eigen::Index size() const { return theta_.size(); }
  Real operator[](Eigen::Index n) const { return theta_(n); }

  /// e^{j theta_n} for every element.
  CVector phasors() const;

  /// Project every entry onto the feasible set.
  PhaseVector quantized(const PhaseSet& set) const;
  bool on_grid(const PhaseSet& set) const;

  bool operator==(const PhaseVector& other) const {
    return theta_.size() == other.theta_.size() && theta_ == other.theta_;
  }

 private:
  RVector theta_;
};

/// Sum of absolute principal angle differences. A metric on the torus.
Real circular_distance(const PhaseVector& a, const PhaseVector& b);

/// Diagonal reflection matrix Phi = diag(e^{j theta}).
struct IrsConfiguration {
  PhaseVector phases;

  CVector diagonal() const { return phases.phasors(); }
  Eigen::Index size() const { return phases.size(); }
  bool operator==(const IrsConfiguration&) const = default;
};

/// Single-stream transmit (w, length N_g) and receive (v, length N_U) beamformers.
struct BeamformerPair {
  CVector w;
  CVector v;
};

struct RadioParams {
  Real bandwidth_hz = 100e6;
  Real tx_power_w = 1.9952623149688795;  // 33 dBm
  Real noise_psd_w_per_hz = 3.9810717055349565e-21;  // -174 dBm/Hz

  static RadioParams from_dbm(Real bandwidth_hz, Real tx_power_dbm, Real noise_psd_dbm_per_hz);

  Real noise_power_w() const { return noise_psd_w_per_hz * bandwidth_hz; }
  /// sigma_x^2 / sigma_n^2.
  Real snr_scale() const { return tx_power_w / noise_power_w(); }
  void validate() const;
};

Real dbm_to_watts(Real dbm);

/// G_k diag(phi) H, the cascaded N_U x N_g channel seen by UE k.
CMatrix cascade(const CMatrix& g_k, const CMatrix& h, const IrsConfiguration& config);

/// Gamma = |v^T G Phi H w|^2 sigma_x^2 / (||v||^2 sigma_n^2).
Real snr(const CMatrix& g_k, const CMatrix& h, const IrsConfiguration& config,
         const BeamformerPair& bf, const RadioParams& radio);

/// log2(1 + snr).
Real rate(Real snr);

/// Partition of K UEs into groups, each served with one shared configuration.
struct ClusterAssignment {
  std::vector<std::size_t> membership;   // per-UE group index
  std::vector<IrsConfiguration> centroids;

  std::size_t effective_z() const { return centroids.size(); }
  std::size_t num_ues() const { return membership.size(); }
  /// UE ids of each group, ascending.
  std::vector<std::vector<std::size_t>> groups() const;
  /// Throws ContractViolation unless membership is a disjoint cover with no empty group.
  void validate(std::size_t k) const;
};

/// B * sum_k R_k, bits per frame.
Real frame_sum_capacity(const ClusterAssignment& assignment, std::span<const Real> rates,
                        const RadioParams& radio);

}  // namespace irs

#endif  // IRS_CORE_HPP
