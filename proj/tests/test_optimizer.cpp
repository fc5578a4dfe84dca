// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "irs/errors.hpp"
#include "irs/harness/oracle.hpp"
#include "irs/optimizer.hpp"
#include "reference.hpp"

using namespace irs;

namespace {

RadioParams scale_radio(Real snr_scale) {
  RadioParams r;
  r.tx_power_w = snr_scale * r.noise_power_w();
  return r;
}

CVector unit_vector(std::mt19937_64& rng, Eigen::Index n) {
  CVector x = ref::random_matrix(rng, n, 1).col(0);
  return x / x.norm();
}

}  // namespace

TEST_CASE("align_phases") {
  CVector s(1), u(1);
  s << std::polar(2.0, kPi / 4);
  u << std::polar(0.5, kPi / 4);
  CHECK(align_phases(s, u, PhaseSet::continuous())[0] == doctest::Approx(-kPi / 2));

  CVector sp(3), up(3);
  sp << 1.0, 2.0, 0.5;
  up << 3.0, 0.1, 1.0;
  CHECK(align_phases(sp, up, PhaseSet::continuous()).theta().isZero());

  s << std::polar(1.0, 0.2 * kPi);
  u << std::polar(1.0, 0.2 * kPi);
  CHECK(align_phases(s, u, PhaseSet::quantized(1))[0] == 0.0);

  CVector z(2), w(2);
  z << 0.0, std::polar(1.0, 1.0);
  w << 1.0, 1.0;
  const PhaseVector t = align_phases(z, w, PhaseSet::continuous());
  CHECK(t[0] == 0.0);
  CHECK(t[1] == doctest::Approx(-1.0));
  CHECK_THROWS_AS(align_phases(z, CVector::Ones(3), PhaseSet::continuous()), ContractViolation);
}

TEST_CASE("aligned phases maximise the coherent sum") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<Real> ang(-kPi, kPi);
  const CVector s = ref::random_matrix(rng, 6, 1).col(0), u = ref::random_matrix(rng, 6, 1).col(0);
  const PhaseVector best = align_phases(s, u, PhaseSet::continuous());
  const auto value = [&](const RVector& th) {
    Complex acc = 0;
    for (Eigen::Index n = 0; n < 6; ++n) acc += s(n) * std::polar(1.0, th(n)) * u(n);
    return std::abs(acc);
  };
  const Real top = value(best.theta());
  CHECK(top == doctest::Approx((s.cwiseAbs().array() * u.cwiseAbs().array()).sum()));
  for (int i = 0; i < 1000; ++i) {
    RVector th(6);
    for (auto& x : th) x = ang(rng);
    CHECK(value(th) <= top + 1e-12);
  }
}

TEST_CASE("best_beamformers on a rank-one cascade") {
  std::mt19937_64 rng(2);
  const CVector a = ref::random_matrix(rng, 2, 1).col(0), b = ref::random_matrix(rng, 3, 1).col(0);
  // G = a, H = b^H with one IRS element at phase 0
  const CMatrix g = a, h = b.adjoint();
  const BeamformerPair bf = best_beamformers(g, h, IrsConfiguration{PhaseVector::zeros(1)});
  CHECK(std::abs(std::abs(bf.w.dot(b)) - b.norm()) < 1e-12);  // w parallel to b
  const Complex gain = (bf.v.transpose() * g * h * bf.w)(0, 0);
  CHECK(std::abs(gain) == doctest::Approx(a.norm() * b.norm()).epsilon(1e-12));
  CHECK(gain.real() > 0);
  CHECK(std::abs(gain.imag()) < 1e-12 * std::abs(gain));
  CHECK(bf.w.norm() == doctest::Approx(1.0));
  CHECK(bf.v.norm() == doctest::Approx(1.0));
}

TEST_CASE("best_beamformers on scalars") {
  const CMatrix g = CMatrix::Constant(1, 1, Complex(0.3, -0.4)), h = CMatrix::Constant(1, 1, Complex(2, 0));
  const BeamformerPair bf = best_beamformers(g, h, IrsConfiguration{PhaseVector::zeros(1)});
  CHECK(std::abs(bf.w(0)) == doctest::Approx(1.0));
  CHECK(std::abs(bf.v(0)) == doctest::Approx(1.0));
  CHECK(std::abs(bf.v(0) * g(0, 0) * h(0, 0) * bf.w(0)) == doctest::Approx(1.0));
}

TEST_CASE("best_beamformers beats random unit pairs") {
  std::mt19937_64 rng(8);
  const CMatrix g = ref::random_matrix(rng, 2, 3), h = ref::random_matrix(rng, 3, 2);
  const IrsConfiguration c{PhaseVector(RVector::LinSpaced(3, -1.0, 2.0))};
  const BeamformerPair bf = best_beamformers(g, h, c);
  const CMatrix a = cascade(g, h, c);
  const Real best = std::abs((bf.v.transpose() * a * bf.w)(0, 0));
  CHECK(best == doctest::Approx(static_cast<double>(ref::sigma1_power(a))).epsilon(1e-10));
  for (int i = 0; i < 1000; ++i) {
    const CVector v = unit_vector(rng, 2), w = unit_vector(rng, 2);
    CHECK(std::abs((v.transpose() * a * w)(0, 0)) <= best + 1e-12);
  }
}

TEST_CASE("best_beamformers on a dead cascade") {
  const IrsConfiguration c{PhaseVector::zeros(2)};
  CHECK_THROWS_AS(best_beamformers(CMatrix::Zero(1, 2), CMatrix::Ones(2, 1), c), DegenerateChannel);
  CHECK(config_rate(CMatrix::Zero(1, 2), CMatrix::Ones(2, 1), c, RadioParams{}) == 0.0);
}

TEST_CASE("optimize_ue single-antenna closed form") {
  std::mt19937_64 rng(4);
  const RadioParams radio = scale_radio(3.0);
  for (int t = 0; t < 20; ++t) {
    const CMatrix g = ref::random_matrix(rng, 1, 7), h = ref::random_matrix(rng, 7, 1);
    Real coherent = 0;
    for (Eigen::Index n = 0; n < 7; ++n) coherent += std::abs(g(0, n)) * std::abs(h(n, 0));
    const PerUeOptimum o = optimize_ue(g, h, PhaseSet::continuous(), OptimizerSettings{}, radio);
    CHECK(o.achievable_rate == doctest::Approx(std::log2(1 + coherent * coherent * 3.0)).epsilon(1e-12));
    CHECK(o.converged);
  }
}

TEST_CASE("optimize_ue bookkeeping") {
  std::mt19937_64 rng(12);
  const RadioParams radio = scale_radio(0.5);
  for (int bits : {0, 1, 2}) {
    const PhaseSet set = bits ? PhaseSet::quantized(bits) : PhaseSet::continuous();
    const CMatrix g = ref::random_matrix(rng, 2, 9), h = ref::random_matrix(rng, 9, 4);
    const PerUeOptimum a = optimize_ue(g, h, set, OptimizerSettings{}, radio);
    const PerUeOptimum b = optimize_ue(g, h, set, OptimizerSettings{}, radio);
    CHECK(a.config == b.config);
    CHECK(a.achievable_rate == b.achievable_rate);
    CHECK(a.rate_history == b.rate_history);
    CHECK(a.beamformers.w == b.beamformers.w);

    CHECK(a.iterations_used >= 1);
    CHECK(a.iterations_used <= 50);
    CHECK(a.rate_history.size() == static_cast<std::size_t>(a.iterations_used));
    for (Real r : a.rate_history) CHECK(r <= a.achievable_rate + 1e-12);
    if (!set.is_continuous()) CHECK(a.config.phases.on_grid(set));
    // the stored rate is reproduced from the stored configuration and beamformers
    CHECK(rate(snr(g, h, a.config, a.beamformers, radio)) == doctest::Approx(a.achievable_rate).epsilon(1e-10));
    CHECK(config_rate(g, h, a.config, radio) == doctest::Approx(a.achievable_rate).epsilon(1e-10));
  }
}

TEST_CASE("optimize_ue iteration cap") {
  std::mt19937_64 rng(13);
  const CMatrix g = ref::random_matrix(rng, 2, 9), h = ref::random_matrix(rng, 9, 4);
  OptimizerSettings one;
  one.max_iterations = 1;
  const PerUeOptimum o = optimize_ue(g, h, PhaseSet::continuous(), one, RadioParams{});
  CHECK(o.iterations_used == 1);
  CHECK_FALSE(o.converged);
  OptimizerSettings bad;
  bad.epsilon = -1;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  bad = OptimizerSettings{};
  bad.max_iterations = 0;
  CHECK_THROWS_AS(optimize_ue(g, h, PhaseSet::continuous(), bad, RadioParams{}), ContractViolation);
  CHECK_THROWS_AS(optimize_ue(CMatrix::Zero(2, 9), h, PhaseSet::continuous(), OptimizerSettings{}, RadioParams{}),
                  DegenerateChannel);
}

TEST_CASE("optimize_ue against enumeration on six elements") {
  harness::OracleConfigSpec spec;
  spec.seeds = 10;
  const auto rep = harness::run_oracle_config(spec);
  for (Real r : rep.ratio) {
    CHECK(r <= 1.0 + 1e-12);
    CHECK(r > 0);
  }
  MESSAGE("N_I=6 b=1 ratio over 10 seeds: min " << rep.min_ratio << ", median " << rep.median_ratio);
}
