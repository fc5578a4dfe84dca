// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "irs/errors.hpp"
#include "irs/numerics.hpp"
#include "reference.hpp"

using namespace irs;

namespace {

CMatrix reconstruct(const SvdResult& d) {
  return d.u * d.singular_values.cast<Complex>().asDiagonal() * d.v.adjoint();
}

}  // namespace

TEST_CASE("svd of a complex scalar is its modulus") {
  CMatrix a(1, 1);
  a(0, 0) = Complex(3, 4);
  const SvdResult d = svd<Real>(a);
  CHECK(d.singular_values(0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(std::abs(d.u(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(d.v(0, 0)) == doctest::Approx(1.0));
  // the V gauge makes the single entry real and positive
  CHECK(d.v(0, 0).imag() == 0.0);
  CHECK(d.v(0, 0).real() > 0);
}

TEST_CASE("svd of the identity") {
  const SvdResult d = svd<Real>(CMatrix::Identity(2, 2));
  CHECK(d.singular_values(0) == doctest::Approx(1.0));
  CHECK(d.singular_values(1) == doctest::Approx(1.0));
}

TEST_CASE("svd reconstructs a random 4x3 matrix") {
  std::mt19937_64 rng(7);
  const CMatrix a = ref::random_matrix(rng, 4, 3);
  const SvdResult d = svd<Real>(a);
  REQUIRE(d.u.rows() == 4);
  REQUIRE(d.u.cols() == 3);
  REQUIRE(d.v.rows() == 3);
  CHECK((a - reconstruct(d)).norm() / a.norm() < 1e-8);
  CHECK(d.singular_values(0) >= d.singular_values(1));
  CHECK(d.singular_values(1) >= d.singular_values(2));
  CHECK(std::abs(d.singular_values(0) - static_cast<Real>(ref::sigma1_power(a))) < 1e-10);
}

TEST_CASE("svd of a diagonal matrix sorts the moduli") {
  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 0) = 1;
  a(1, 1) = Complex(0, -3);
  a(2, 2) = Complex(-2, 0);
  const SvdResult d = svd<Real>(a);
  CHECK(std::abs(d.singular_values(0) - 3) < 1e-12);
  CHECK(std::abs(d.singular_values(1) - 2) < 1e-12);
  CHECK(std::abs(d.singular_values(2) - 1) < 1e-12);
}

TEST_CASE("svd works in long double") {
  std::mt19937_64 rng(3);
  const CMatrixT<long double> a = ref::random_matrix(rng, 3, 5).cast<std::complex<long double>>();
  const auto d = svd<long double>(a);
  const CMatrixT<long double> back = d.u * d.singular_values.cast<std::complex<long double>>().asDiagonal() * d.v.adjoint();
  CHECK(static_cast<double>((a - back).norm()) < 1e-15);
}

TEST_CASE("svd rejects bad input") {
  CHECK_THROWS_AS(svd<Real>(CMatrix(0, 3)), ContractViolation);
  CMatrix a = CMatrix::Identity(2, 2);
  a(1, 0) = Complex(std::nan(""), 0);
  CHECK_THROWS_AS(svd<Real>(a), ContractViolation);
}

TEST_CASE("top singular value matches the full svd") {
  std::mt19937_64 rng(11);
  for (auto [r, c] : {std::pair{1, 1}, {1, 6}, {6, 1}, {2, 5}, {5, 2}, {4, 4}, {3, 7}}) {
    const CMatrix a = ref::random_matrix(rng, r, c);
    CHECK(top_singular_value<Real>(a) == doctest::Approx(svd<Real>(a).singular_values(0)).epsilon(1e-12));
  }
}

TEST_CASE("matmul") {
  std::mt19937_64 rng(5);
  const CMatrix a = ref::random_matrix(rng, 3, 4);
  CHECK((matmul<Real>(CMatrix::Identity(3, 3), a) - a).norm() == 0.0);

  CMatrix row(1, 2), col(2, 1);
  row << Complex(1, 0), Complex(0, 1);
  col << Complex(1, 0), Complex(0, 1);
  const CMatrix s = matmul<Real>(row, col);
  REQUIRE(s.size() == 1);
  CHECK(std::abs(s(0, 0)) < 1e-15);

  const CMatrix b = ref::random_matrix(rng, 4, 2), c = ref::random_matrix(rng, 2, 5);
  const CMatrix left = matmul<Real>(matmul<Real>(a, b), c);
  const CMatrix right = matmul<Real>(a, matmul<Real>(b, c));
  CHECK((left - right).norm() < 1e-12 * left.norm());

  CHECK_THROWS_AS(matmul<Real>(a, a), ContractViolation);
}
