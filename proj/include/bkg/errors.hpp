#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bkg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or index ranges that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Rank deficiency, singular metric or degenerate immersion.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Bad user input (tolerances, directions, policies).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of a theorem check is not satisfied at the point.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A field produced a non-finite value somewhere in a stencil.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::vector<double> point)
      : Error(what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

}  // namespace bkg
