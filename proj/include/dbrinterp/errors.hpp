// Copyright 2026 The dbrinterp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dbrinterp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input lies outside the domain of the operation (non-PSD, unstable, zero on the circle, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a pole, i.e. I - zA is numerically singular.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, double re, double im) : Error(what), re_(re), im_(im) {}
  double re() const noexcept { return re_; }
  double im() const noexcept { return im_; }

 private:
  double re_;
  double im_;
};

/// The problem is ill-posed for the chosen method (e.g. Stein solve with spectral radius >= 1).
class IllPosedError : public Error {
 public:
  using Error::Error;
};

/// A linear system was numerically singular.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the input structure was violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The interpolation problem has no solution; carries the solvability margin.
class UnsolvableError : public Error {
 public:
  UnsolvableError(const std::string& what, double margin) : Error(what), margin_(margin) {}
  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

/// Free parameter violates the norm budget.
class BudgetExceededError : public UnsolvableError {
 public:
  using UnsolvableError::UnsolvableError;
};

/// Data are internally inconsistent (Stein residual, V not well defined, ...).
class InconsistencyError : public Error {
 public:
  InconsistencyError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Pointwise parameter recovery failed.
class RecoveryError : public Error {
 public:
  RecoveryError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace dbrinterp
