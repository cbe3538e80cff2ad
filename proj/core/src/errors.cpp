#include "potd/errors.hpp"

namespace potd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
      return "invalid_input";
    case ErrorKind::kDegenerateInput:
      return "degenerate_input";
    case ErrorKind::kConvergence:
      return "convergence";
    case ErrorKind::kNumeric:
      return "numeric";
    case ErrorKind::kFileNotFound:
      return "file_not_found";
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kMissingColumn:
      return "missing_column";
    case ErrorKind::kSingleClass:
      return "single_class";
  }
  return "unknown";
}

}  // namespace potd
