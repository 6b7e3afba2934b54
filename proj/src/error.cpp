#include "chest/error.hpp"

namespace chest {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Boundary: return "boundary error";
    case ErrorKind::EmptyProxy: return "empty proxy set";
    case ErrorKind::Index: return "index error";
    case ErrorKind::DegenerateProblem: return "degenerate problem";
    case ErrorKind::Evaluation: return "evaluation error";
    case ErrorKind::Propagation: return "propagation error";
    case ErrorKind::Constraint: return "constraint error";
    case ErrorKind::Size: return "size error";
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::UndefinedMetric: return "undefined metric";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Io: return "I/O error";
  }
  return "error";
}

}  // namespace chest
