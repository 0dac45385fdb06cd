#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace loadcap {

/// Bad input: malformed files, invalid meshes, violated preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed mesh or traction file. The message carries the field path.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Mesh that parsed but violates one or more invariants.
class InvalidMeshError : public ValidationError {
 public:
  explicit InvalidMeshError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Numerical failure: LP breakdown, inconsistent primal/dual results.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simplex exceeded its pivot budget.
class IterationLimitError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace loadcap
