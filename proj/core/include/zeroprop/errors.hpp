#pragma once

#include <stdexcept>
#include <string>

namespace zeroprop {

/// Base of every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A denominator that vanishes at the evaluation point (a+b too close to 0).
class NearSingular : public Error {
 public:
  using Error::Error;
};

/// A jet entry or extracted quantity overflowed or became NaN.
class NonFinite : public Error {
 public:
  using Error::Error;
};

/// log of a non-positive mean-square constant was requested.
class NonPositiveC : public Error {
 public:
  using Error::Error;
};

/// A polynomial violates a structural identity (P(0)=0, Q'(x)=Q'(1-x), ...).
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

/// The optimizer objective could not be evaluated at the seed point.
class EvaluationFailure : public Error {
 public:
  using Error::Error;
};

/// grid_scan was asked to enumerate more than three free parameters.
class DimensionTooHigh : public Error {
 public:
  using Error::Error;
};

}  // namespace zeroprop
