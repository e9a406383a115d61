#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace penrose {

enum class ErrorKind {
  NonAsymptoticallyFlat,
  DegenerateConformalFactor,
  SolverDiverged,
  DomainError,
  HorizonNotConverged,
  FlowInvariantViolated,
  BoundaryProjectionInconsistent,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` tells the
// caller which contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  // The message without the kind prefix that what() carries.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// Thrown by the iterative solvers; carries the residual history so callers
// can report how far the solve got.
class SolverDiverged : public Error {
 public:
  SolverDiverged(const std::string& what, std::vector<double> residuals);

  const std::vector<double>& residual_history() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace penrose
