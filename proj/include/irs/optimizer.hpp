// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_OPTIMIZER_HPP
#define IRS_OPTIMIZER_HPP

// Per-UE alternating optimisation of the IRS phases and the gNB/UE
// beamformers. Each round aligns the IRS phases with the current effective
// channels (s = v^T G, u = H w), projects them onto the feasible phase set,
// then re-derives both beamformers from the dominant singular pair of the
// resulting cascade G Phi H.

#include <vector>

#include "irs/core.hpp"

namespace irs {

struct OptimizerSettings {
  Real epsilon = 1e-6;     // bit/s/Hz, stop when consecutive rates differ by less
  int max_iterations = 50;

  void validate() const;
};

struct PerUeOptimum {
  IrsConfiguration config;
  BeamformerPair beamformers;
  Real achievable_rate = 0;       // bit/s/Hz
  int iterations_used = 0;
  bool converged = false;
  std::vector<Real> rate_history;  // rate after each round, in order
};

/// theta_n = quantize(-(arg s_n + arg u_n)); a zero product s_n u_n counts as phase 0.
PhaseVector align_phases(const CVector& s, const CVector& u, const PhaseSet& set);

/// Dominant singular pair of G Phi H, with v conjugated so that v^T (G Phi H) w = sigma_1 > 0.
/// Throws DegenerateChannel when the cascade is identically zero.
BeamformerPair best_beamformers(const CMatrix& g_k, const CMatrix& h, const IrsConfiguration& config);

/// Rate of a UE served with `config` and its best beamformers: log2(1 + sigma_1^2 * snr_scale).
/// A zero cascade yields rate 0.
Real config_rate(const CMatrix& g_k, const CMatrix& h, const IrsConfiguration& config,
                 const RadioParams& radio);

PerUeOptimum optimize_ue(const CMatrix& g_k, const CMatrix& h, const PhaseSet& set,
                         const OptimizerSettings& settings, const RadioParams& radio);

}  // namespace irs

#endif  // IRS_OPTIMIZER_HPP
