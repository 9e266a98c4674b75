#pragma once

#include <stdexcept>
#include <string>

namespace hgcs {

// Coarse classification used by the CLI to pick an exit code.
enum class ErrorCategory { invalid_argument, numerical_domain, convergence };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Invalid parameters, positivity violations, malformed configuration.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what)
      : Error(ErrorCategory::invalid_argument, what) {}
};

/// (p,q) shape outside the tabulated weight cases.
class UnsupportedCaseError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Operation not defined for the parity of the given state.
class ParityError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Argument outside the region where the function is defined or converges.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCategory::numerical_domain, what) {}
};

class OverflowError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// 0/0 situations such as the Mandel parameter of the vacuum.
class DegenerateStateError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved_error)
      : Error(ErrorCategory::convergence, what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

}  // namespace hgcs
