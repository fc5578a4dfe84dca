// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_NUMERICS_HPP
#define IRS_NUMERICS_HPP

// Small dense complex kernels. Everything here is templated on the real scalar
// so the same code serves double (production) and long double (test oracles).

#include <algorithm>
#include <cmath>
#include <string>

#include "irs/errors.hpp"
#include "irs/types.hpp"

namespace irs {

template <typename Scalar>
struct SvdResultT {
  CMatrixT<Scalar> u;                 // left singular vectors (columns)
  RVectorT<Scalar> singular_values;   // descending, nonnegative
  CMatrixT<Scalar> v;                 // right singular vectors (columns)
};
using SvdResult = SvdResultT<Real>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const auto z = a(i, j);
      if (!std::isfinite(std::real(z)) || !std::isfinite(std::imag(z))) return false;
    }
  return true;
}

/// Matrix product with an explicit dimension check (Eigen only asserts in debug builds).
template <typename Scalar>
CMatrixT<Scalar> matmul(const CMatrixT<Scalar>& a, const CMatrixT<Scalar>& b) {
  detail::require(a.cols() == b.rows(),
                  "matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                      std::to_string(b.rows()) + ")");
  CMatrixT<Scalar> c = a * b;
  if (!all_finite(c)) throw NumericFailure("matmul: non-finite product");
  return c;
}

/// Thin SVD A = U diag(s) V^H with singular values in descending order.
///
/// The per-column phase of the singular vectors is fixed so that the
/// largest-magnitude entry of each V column is real and positive (first such
/// entry on ties); the matching U column is rotated by the same phase so the
/// factorisation is unchanged.
template <typename Scalar>
SvdResultT<Scalar> svd(const CMatrixT<Scalar>& a) {
  detail::require(a.rows() >= 1 && a.cols() >= 1, "svd: empty matrix");
  if (!all_finite(a)) throw ContractViolation("svd: non-finite input");

  Eigen::JacobiSVD<CMatrixT<Scalar>> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success)
    throw NumericFailure("svd: Jacobi iteration did not converge");

  SvdResultT<Scalar> out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  if (!all_finite(out.u) || !all_finite(out.v))
    throw NumericFailure("svd: non-finite singular vectors");

  for (Eigen::Index c = 0; c < out.v.cols(); ++c) {
    Eigen::Index arg = 0;
    Scalar best = Scalar(-1);
    for (Eigen::Index r = 0; r < out.v.rows(); ++r) {
      const Scalar m = std::abs(out.v(r, c));
      if (m > best) {
        best = m;
        arg = r;
      }
    }
    if (best <= Scalar(0)) continue;
    const std::complex<Scalar> gauge = std::conj(out.v(arg, c)) / best;
    out.v.col(c) *= gauge;
    out.u.col(c) *= gauge;
    out.v(arg, c) = std::complex<Scalar>(best, Scalar(0));
  }
  return out;
}

/// Largest singular value only, via the Gram matrix of the short side.
/// One- and two-row (or column) inputs use the closed-form eigenvalue.
template <typename Scalar>
Scalar top_singular_value(const CMatrixT<Scalar>& a) {
  detail::require(a.rows() >= 1 && a.cols() >= 1, "top_singular_value: empty matrix");
  const CMatrixT<Scalar> gram = a.rows() <= a.cols() ? CMatrixT<Scalar>(a * a.adjoint())
                                                     : CMatrixT<Scalar>(a.adjoint() * a);
  if (gram.rows() == 1) return std::sqrt(std::real(gram(0, 0)));
  if (gram.rows() == 2) {
    const Scalar p = std::real(gram(0, 0));
    const Scalar q = std::real(gram(1, 1));
    const Scalar half = (p - q) / 2;
    const Scalar lambda = (p + q) / 2 + std::sqrt(half * half + std::norm(gram(0, 1)));
    return std::sqrt(std::max(lambda, Scalar(0)));
  }
  Eigen::SelfAdjointEigenSolver<CMatrixT<Scalar>> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericFailure("top_singular_value: eigen-solver failed");
  return std::sqrt(std::max(eig.eigenvalues()(gram.rows() - 1), Scalar(0)));
}

}  // namespace irs

#endif  // IRS_NUMERICS_HPP
