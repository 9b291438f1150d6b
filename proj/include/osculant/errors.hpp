#pragma once

#include <stdexcept>
#include <string>

namespace osculant {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input outside the operation's domain (zero vector, n < 2, wrong sizes).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Jet rows lost rank: the curve is not generic/nondegenerate at the probed parameter.
class DegeneracyError : public Error {
public:
  using Error::Error;
};

/// Numerical resolution was insufficient; the caller should perturb the input or raise resolution.
class PrecisionError : public Error {
public:
  using Error::Error;
};

/// The point lies numerically on the discriminant: the root total has the wrong parity.
class OnDiscriminant : public PrecisionError {
public:
  using PrecisionError::PrecisionError;
};

/// A geometric construction failed (non-transversal projection, infeasible hull LP).
class GeometryError : public Error {
public:
  using Error::Error;
};

class UnsupportedFormat : public Error {
public:
  using Error::Error;
};

}  // namespace osculant
