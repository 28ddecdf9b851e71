#pragma once

#include <stdexcept>

namespace bwcrm {

/* Exception hierarchy.
 *
 * Everything thrown by the library derives from Error, except plain
 * std::invalid_argument which is reserved for caller contract violations
 * (empty lists, out-of-range tunables, and the like).
 */

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand dimensions do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf encountered where a finite value is required.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Structurally unusable input: zero normal, zero row, empty ambient space.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// A linear system that must be consistent is not; the feasible set is empty.
class InconsistentSystemError : public Error {
 public:
  using Error::Error;
};

// A factorization or solve lost rank or produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Geometric degeneracy: no equidistant point within tolerance, or the
// start replacement search exhausted its budget.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// A trace is too short to support the requested estimate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace bwcrm
