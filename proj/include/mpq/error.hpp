#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mpq {

enum class ErrorKind {
  InvalidPoint,
  NotOrthogonal,
  PoleProjection,
  OrderExceeded,
  AmbiguousElements,
  BadParameters,
  SingularBasePoint,
  OnOrbit,
  DegenerateTriple,
  DimensionTooSmall,
  AtSingularity,
};

std::string_view error_name(ErrorKind kind) noexcept;

// Every validation failure in the library is reported through this type; the
// kind is what the command line prints on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace mpq
