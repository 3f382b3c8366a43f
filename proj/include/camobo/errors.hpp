#pragma once

#include <stdexcept>
#include <string>

namespace camobo {

/// Raised when a linear-algebra step cannot be completed (e.g. Cholesky
/// failure at the maximum jitter, or an acquisition surface that is
/// non-finite everywhere).
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// An objective evaluation could not produce a valid M-vector.
class EvaluationFailure : public std::runtime_error {
 public:
  explicit EvaluationFailure(const std::string& what) : std::runtime_error(what) {}
};

/// A benchmark problem cannot be normalized (degenerate objective range).
class InvalidProblem : public std::runtime_error {
 public:
  explicit InvalidProblem(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or incomplete run configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace camobo
