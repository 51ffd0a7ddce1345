#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace taxis {

// Exit statuses of the command-line tool.
enum class ExitCode : int {
  ok = 0,
  validation = 2,
  numerical = 3,
  io = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Bad input: configuration, parameters or preconditions.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ExitCode::validation, what) {}
  ValidationError(const std::string& what, std::vector<std::string> violations)
      : Error(ExitCode::validation, what), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ExitCode::numerical, what) {}
};

// Step size above the explicit stability bound.
class CflError : public NumericalError {
 public:
  CflError(const std::string& what, double admissible)
      : NumericalError(what), admissible_dt_(admissible) {}
  double admissible_dt() const noexcept { return admissible_dt_; }

 private:
  double admissible_dt_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ExitCode::io, what) {}
};

}  // namespace taxis
