// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_TYPES_HPP
#define IRS_TYPES_HPP

#include <complex>

#include <Eigen/Dense>

namespace irs {

template <typename Scalar>
using CMatrixT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVectorT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RVectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Real = double;
using Complex = std::complex<Real>;
using CMatrix = CMatrixT<Real>;
using CVector = CVectorT<Real>;
using RVector = RVectorT<Real>;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Real kTwoPi = 2.0 * kPi;

}  // namespace irs

#endif  // IRS_TYPES_HPP
