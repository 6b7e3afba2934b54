#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chest {

enum class ErrorKind {
  InvalidInput,
  Dimension,
  Boundary,
  EmptyProxy,
  Index,
  DegenerateProblem,
  Evaluation,
  Propagation,
  Constraint,
  Size,
  Parameter,
  UndefinedMetric,
  Parse,
  Validation,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes failure classes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chest
