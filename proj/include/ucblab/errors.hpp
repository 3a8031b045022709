#pragma once

#include <stdexcept>
#include <string>

namespace ucblab {

// Index errors use std::out_of_range directly.

/// A scalar parameter lies outside its documented domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two objects disagree on (S, A, H, K).
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An instance is too large for an exhaustive computation.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed serialized input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The value-ratio estimator's denominator vanished.
class DegenerateTargetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ucblab
