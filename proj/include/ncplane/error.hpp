#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncplane {

enum class ErrorKind {
  NonPositiveConstant,
  CriticalRegime,
  DomainError,
  NegativeArgument,
  StepFailure,
  QuadratureNonConvergence,
  MissingInput,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` is what the
// CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ncplane
