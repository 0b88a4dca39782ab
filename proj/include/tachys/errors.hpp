#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tachys {

// Base of every numeric-domain failure raised by the library. `module()` and
// `kind()` form the machine-readable payload the CLI prints on exit 1.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string kind, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)), kind_(std::move(kind)) {}

  std::string_view module() const noexcept { return module_; }
  std::string_view kind() const noexcept { return kind_; }

 private:
  std::string module_;
  std::string kind_;
};

class DomainError : public Error {
 public:
  DomainError(std::string module, const std::string& what)
      : Error(std::move(module), "domain", what) {}
};

// Raised when a metric (or a matrix that has to be one) is not positive
// definite. Carries the offending eigenvalue or determinant.
class MetricDegeneracyError : public Error {
 public:
  MetricDegeneracyError(std::string module, const std::string& what, double value)
      : Error(std::move(module), "metric-degeneracy", what), value_(value) {}

  double value() const noexcept { return value_; }

 private:
  double value_;
};

class TrivialTargetError : public Error {
 public:
  TrivialTargetError(std::string module, const std::string& what)
      : Error(std::move(module), "trivial-target", what) {}
};

class AlignmentError : public Error {
 public:
  AlignmentError(std::string module, const std::string& what, double residual)
      : Error(std::move(module), "alignment", what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DegenerateBasisError : public Error {
 public:
  DegenerateBasisError(std::string module, const std::string& what)
      : Error(std::move(module), "degenerate-basis", what) {}
};

class ChannelDecompositionError : public Error {
 public:
  ChannelDecompositionError(std::string module, const std::string& what, double residual)
      : Error(std::move(module), "channel-decomposition", what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace tachys
