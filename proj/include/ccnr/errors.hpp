// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ccnr {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation (non-square, mismatched dims).
class ShapeError : public Error {
public:
  using Error::Error;
};

/// A parameter lies outside the range where the formula or family is defined.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Matrix fails the Hermiticity tolerance.
class SymmetryError : public Error {
public:
  using Error::Error;
};

/// A state violates one of its invariants (trace, positivity, norm).
/// Carries the invariant's name and the measured residual so callers can
/// report them.
class InvariantError : public Error {
public:
  InvariantError(std::string invariant, double residual)
      : Error("invariant violated: " + invariant + " (residual " +
              std::to_string(residual) + ")"),
        invariant_(std::move(invariant)), residual_(residual) {}

  const std::string& invariant() const noexcept { return invariant_; }
  double residual() const noexcept { return residual_; }

private:
  std::string invariant_;
  double residual_;
};

} // namespace ccnr
