#include "jumpsde/error.hpp"

#include <fmt/format.h>

namespace jumpsde {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Range: return "range error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::StepSize: return "step-size error";
    case ErrorKind::Solver: return "solver error";
    case ErrorKind::Mesh: return "mesh error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

PathFailure::PathFailure(ErrorKind kind, std::uint64_t seed,
                         std::uint64_t path_index, const std::string& cause)
    : Error(kind, fmt::format("path {} (seed {}) failed: {}", path_index, seed,
                              cause)),
      seed_(seed),
      path_index_(path_index) {}

}  // namespace jumpsde
