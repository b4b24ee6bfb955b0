#include "vpfp/errors.hpp"

namespace vpfp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::quadrature_overflow: return "quadrature_overflow";
    case ErrorKind::nonpositive_density: return "nonpositive_density";
    case ErrorKind::compatibility: return "compatibility";
    case ErrorKind::singular_system: return "singular_system";
    case ErrorKind::nonconvergence: return "nonconvergence";
    case ErrorKind::bracket_failure: return "bracket_failure";
    case ErrorKind::picard_divergence: return "picard_divergence";
    case ErrorKind::admissibility: return "admissibility";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace vpfp
