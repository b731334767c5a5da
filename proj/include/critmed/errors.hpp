#pragma once

#include <stdexcept>
#include <string>

namespace critmed {

enum class ErrorKind {
  InvalidArgument,
  OutOfRange,
  SolverFailure,
  QuadratureFailure,
  IntegrationFailure,
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind kind) noexcept;

// Base of every exception thrown by the library. The C API maps `kind()` onto
// its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::InvalidArgument, what) {}
};

class OutOfRange : public Error {
 public:
  explicit OutOfRange(const std::string& what)
      : Error(ErrorKind::OutOfRange, what) {}
};

class SolverFailure : public Error {
 public:
  explicit SolverFailure(const std::string& what)
      : Error(ErrorKind::SolverFailure, what) {}
};

class IntegrationFailure : public Error {
 public:
  explicit IntegrationFailure(const std::string& what)
      : Error(ErrorKind::IntegrationFailure, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::ConfigError, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::IoError, what) {}
};

}  // namespace critmed
