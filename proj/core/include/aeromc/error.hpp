#pragma once

#include <stdexcept>
#include <string>

namespace aeromc {

/// Base class of every exception thrown by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A particle with no dry mass, or a composition vector that does not match
/// the species database.
class DegenerateParticleError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Query that is well-formed but not supported by the model (e.g. a pdf of a
/// mono mode, supersaturated equilibration).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Time or size-parameter argument outside the supported range.
class RangeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Validation failure tied to a location in a scenario document.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class SyntaxError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Missing, unknown or wrongly-typed field, or a reference to an undefined
/// species.
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Well-typed value that violates a model constraint.
class SemanticError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace aeromc
