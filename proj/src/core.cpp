// SPDX-License-Identifier: Apache-2.0
#include "irs/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "irs/errors.hpp"

namespace irs {

PhaseSet PhaseSet::quantized(int bits) {
  detail::require(bits >= 1 && bits <= 16, "PhaseSet: bits must lie in [1, 16]");
  return PhaseSet(bits);
}

Real PhaseSet::grid_value(std::size_t m) const {
  return wrap_phase(static_cast<Real>(m % levels()) * step());
}

Real wrap_phase(Real x) {
  detail::require(std::isfinite(x), "wrap_phase: non-finite angle");
  if (x >= -kPi && x < kPi) return x;
  Real r = std::fmod(x + kPi, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0;
  return r - kPi;
}

Real quantize_phase(Real theta, const PhaseSet& set) {
  if (set.is_continuous()) return wrap_phase(theta);
  detail::require(std::isfinite(theta), "quantize_phase: non-finite angle");

  const std::size_t levels = set.levels();
  const Real step = set.step();
  Real t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;

  auto lower = static_cast<std::size_t>(std::floor(t / step));
  if (lower >= levels) lower = levels - 1;
  const std::size_t upper = (lower + 1) % levels;
  const Real below = t - static_cast<Real>(lower) * step;
  const Real above = static_cast<Real>(lower + 1) * step - t;

  std::size_t pick;
  if (below < above)
    pick = lower;
  else if (above < below)
    pick = upper;
  else
    pick = std::min(lower, upper);
  return set.grid_value(pick);
}

PhaseVector::PhaseVector(RVector theta) : theta_(std::move(theta)) {
  for (Eigen::Index n = 0; n < theta_.size(); ++n) theta_(n) = wrap_phase(theta_(n));
}

CVector PhaseVector::phasors() const {
  CVector out(theta_.size());
  for (Eigen::Index n = 0; n < theta_.size(); ++n) out(n) = std::polar(1.0, theta_(n));
  return out;
}

PhaseVector PhaseVector::quantized(const PhaseSet& set) const {
  RVector q(theta_.size());
  for (Eigen::Index n = 0; n < theta_.size(); ++n) q(n) = quantize_phase(theta_(n), set);
  return PhaseVector(std::move(q));
}

bool PhaseVector::on_grid(const PhaseSet& set) const {
  if (set.is_continuous()) return true;
  for (Eigen::Index n = 0; n < theta_.size(); ++n)
    if (quantize_phase(theta_(n), set) != theta_(n)) return false;
  return true;
}

Real circular_distance(const PhaseVector& a, const PhaseVector& b) {
  detail::require(a.size() == b.size(), "circular_distance: length mismatch");
  Real d = 0;
  for (Eigen::Index n = 0; n < a.size(); ++n) {
    // |a - b| < 2 pi for wrapped entries; this form is exactly symmetric.
    const Real gap = std::abs(a[n] - b[n]);
    d += std::min(gap, kTwoPi - gap);
  }
  return d;
}

Real dbm_to_watts(Real dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

RadioParams RadioParams::from_dbm(Real bandwidth_hz, Real tx_power_dbm,
                                  Real noise_psd_dbm_per_hz) {
  RadioParams r{bandwidth_hz, dbm_to_watts(tx_power_dbm), dbm_to_watts(noise_psd_dbm_per_hz)};
  r.validate();
  return r;
}

void RadioParams::validate() const {
  detail::require(bandwidth_hz > 0 && tx_power_w > 0 && noise_psd_w_per_hz > 0,
                  "RadioParams: bandwidth, power and noise density must be positive");
}

CMatrix cascade(const CMatrix& g_k, const CMatrix& h, const IrsConfiguration& config) {
  detail::require(g_k.cols() == h.rows() && g_k.cols() == config.size(),
                  "cascade: IRS dimension mismatch between G, Phi and H");
  CMatrix scaled = g_k;
  const CVector phi = config.diagonal();
  for (Eigen::Index n = 0; n < scaled.cols(); ++n) scaled.col(n) *= phi(n);
  return scaled * h;
}

Real snr(const CMatrix& g_k, const CMatrix& h, const IrsConfiguration& config,
         const BeamformerPair& bf, const RadioParams& radio) {
  detail::require(g_k.cols() == h.rows() && g_k.cols() == config.size(),
                  "snr: IRS dimension mismatch between G, Phi and H");
  detail::require(bf.v.size() == g_k.rows() && bf.w.size() == h.cols(),
                  "snr: beamformer length mismatch");
  const Real vnorm2 = bf.v.squaredNorm();
  detail::require(vnorm2 > 0, "snr: zero receive beamformer");
  // v^T (G Phi H) w without forming the full cascade.
  const CVector hw = h * bf.w;
  const CVector phw = config.diagonal().cwiseProduct(hw);
  const Complex y = bf.v.transpose() * (g_k * phw);
  return std::norm(y) * radio.snr_scale() / vnorm2;
}

Real rate(Real snr) {
  detail::require(snr >= 0, "rate: negative snr");
  return std::log2(1.0 + snr);
}

std::vector<std::vector<std::size_t>> ClusterAssignment::groups() const {
  std::vector<std::vector<std::size_t>> out(centroids.size());
  for (std::size_t k = 0; k < membership.size(); ++k) {
    detail::require(membership[k] < centroids.size(), "ClusterAssignment: group index out of range");
    out[membership[k]].push_back(k);
  }
  return out;
}

void ClusterAssignment::validate(std::size_t k) const {
  detail::require(membership.size() == k,
                  "ClusterAssignment: covers " + std::to_string(membership.size()) + " UEs, expected " +
                      std::to_string(k));
  for (const auto& g : groups()) detail::require(!g.empty(), "ClusterAssignment: empty group");
}

Real frame_sum_capacity(const ClusterAssignment& assignment, std::span<const Real> rates,
                        const RadioParams& radio) {
  assignment.validate(rates.size());
  Real total = 0;
  for (Real r : rates) total += r;
  return radio.bandwidth_hz * total;
}

}  // namespace irs
