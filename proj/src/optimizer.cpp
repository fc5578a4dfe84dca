// SPDX-License-Identifier: Apache-2.0
#include "irs/optimizer.hpp"

#include <cmath>

#include "irs/errors.hpp"
#include "irs/numerics.hpp"

namespace irs {

void OptimizerSettings::validate() const {
  detail::require(epsilon > 0, "OptimizerSettings: epsilon must be positive");
  detail::require(max_iterations >= 1, "OptimizerSettings: max_iterations must be at least 1");
}

PhaseVector align_phases(const CVector& s, const CVector& u, const PhaseSet& set) {
  detail::require(s.size() == u.size(), "align_phases: s and u lengths differ");
  RVector theta(s.size());
  for (Eigen::Index n = 0; n < s.size(); ++n) {
    const Complex p = s(n) * u(n);
    const Real accumulated = (p == Complex(0, 0)) ? 0.0 : std::arg(s(n)) + std::arg(u(n));
    theta(n) = quantize_phase(-accumulated, set);
  }
  return PhaseVector(std::move(theta));
}

BeamformerPair best_beamformers(const CMatrix& g_k, const CMatrix& h, const IrsConfiguration& config) {
  const CMatrix m = cascade(g_k, h, config);
  if (m.cwiseAbs().maxCoeff() == 0.0) throw DegenerateChannel("best_beamformers: all-zero cascade channel");
  const SvdResult d = svd<Real>(m);
  if (d.singular_values(0) == 0.0) throw DegenerateChannel("best_beamformers: zero top singular value");
  return BeamformerPair{d.v.col(0), d.u.col(0).conjugate()};
}

Real config_rate(const CMatrix& g_k, const CMatrix& h, const IrsConfiguration& config,
                 const RadioParams& radio) {
  const Real sigma = top_singular_value<Real>(cascade(g_k, h, config));
  return rate(sigma * sigma * radio.snr_scale());
}

PerUeOptimum optimize_ue(const CMatrix& g_k, const CMatrix& h, const PhaseSet& set,
                         const OptimizerSettings& settings, const RadioParams& radio) {
  settings.validate();
  detail::require(g_k.cols() == h.rows(), "optimize_ue: G and H disagree on the IRS size");

  BeamformerPair bf{CVector::Ones(h.cols()) / std::sqrt(static_cast<Real>(h.cols())),
                    CVector::Ones(g_k.rows()) / std::sqrt(static_cast<Real>(g_k.rows()))};

  PerUeOptimum best;
  best.achievable_rate = -1;
  Real previous = 0;
  int t = 0;
  bool converged = false;
  std::vector<Real> history;

  while (t < settings.max_iterations) {
    const CVector s = (bf.v.transpose() * g_k).transpose();
    const CVector u = h * bf.w;
    IrsConfiguration config{align_phases(s, u, set)};
    bf = best_beamformers(g_k, h, config);
    const Real r = rate(snr(g_k, h, config, bf, radio));
    history.push_back(r);
    ++t;

    if (r > best.achievable_rate) {
      best.config = std::move(config);
      best.beamformers = bf;
      best.achievable_rate = r;
    }
    if (t > 1 && std::abs(r - previous) < settings.epsilon) {
      converged = true;
      break;
    }
    previous = r;
  }

  best.iterations_used = t;
  best.converged = converged;
  best.rate_history = std::move(history);
  return best;
}

}  // namespace irs
