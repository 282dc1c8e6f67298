#pragma once

#include <stdexcept>
#include <string>

namespace adnoise {

// Process exit codes used by the command-line tool.
enum class ErrorKind : int {
  configuration = 2,
  model = 3,
  numerical = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::configuration, what) {}
};

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(ErrorKind::model, what) {}
};

// Argument outside the domain of a physical formula (z <= 0, ...).
class DomainError : public ModelError {
 public:
  explicit DomainError(const std::string& what) : ModelError(what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

// Grid too small or too coarse for the states it is asked to hold.
class GridError : public NumericalError {
 public:
  explicit GridError(const std::string& what) : NumericalError(what) {}
};

// Fits and regime analyses that cannot be carried out on the given data.
class AnalysisError : public NumericalError {
 public:
  explicit AnalysisError(const std::string& what) : NumericalError(what) {}
};

}  // namespace adnoise
