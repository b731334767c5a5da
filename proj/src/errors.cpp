#include "critmed/errors.hpp"

namespace critmed {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::QuadratureFailure: return "quadrature-failure";
    case ErrorKind::IntegrationFailure: return "integration-failure";
    case ErrorKind::ConfigError: return "config-error";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown";
}

}  // namespace critmed
