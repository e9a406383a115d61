#include "penrose/errors.hpp"

#include <utility>

namespace penrose {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonAsymptoticallyFlat: return "NonAsymptoticallyFlat";
    case ErrorKind::DegenerateConformalFactor: return "DegenerateConformalFactor";
    case ErrorKind::SolverDiverged: return "SolverDiverged";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::HorizonNotConverged: return "HorizonNotConverged";
    case ErrorKind::FlowInvariantViolated: return "FlowInvariantViolated";
    case ErrorKind::BoundaryProjectionInconsistent: return "BoundaryProjectionInconsistent";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

SolverDiverged::SolverDiverged(const std::string& what, std::vector<double> residuals)
    : Error(ErrorKind::SolverDiverged, what), residuals_(std::move(residuals)) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace penrose
