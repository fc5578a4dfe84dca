// SPDX-License-Identifier: Apache-2.0
#ifndef IRS_ERRORS_HPP
#define IRS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace irs {

/// A caller broke a documented precondition (dimension mismatch, out-of-range argument).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative numeric kernel failed to converge or produced non-finite output.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The cascade channel is identically zero, so no beamformer is defined.
class DegenerateChannel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool ok, const std::string& what) {
  if (!ok) throw ContractViolation(what);
}
}  // namespace detail

}  // namespace irs

#endif  // IRS_ERRORS_HPP
