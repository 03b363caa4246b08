#include "mpq/error.hpp"

namespace mpq {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::PoleProjection: return "PoleProjection";
    case ErrorKind::OrderExceeded: return "OrderExceeded";
    case ErrorKind::AmbiguousElements: return "AmbiguousElements";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::SingularBasePoint: return "SingularBasePoint";
    case ErrorKind::OnOrbit: return "OnOrbit";
    case ErrorKind::DegenerateTriple: return "DegenerateTriple";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::AtSingularity: return "AtSingularity";
  }
  return "Unknown";
}

}  // namespace mpq
