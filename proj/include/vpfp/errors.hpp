#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vpfp {

enum class ErrorKind {
  precondition,
  quadrature_overflow,
  nonpositive_density,
  compatibility,
  singular_system,
  nonconvergence,
  bracket_failure,
  picard_divergence,
  admissibility,
  config,
  io,
};

std::string_view to_string(ErrorKind kind);

/** Exception carrying a machine-readable kind tag. */
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::precondition, message);
}

}  // namespace vpfp
