#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jumpsde {

enum class ErrorKind {
  Domain,      // argument outside the function's domain (x <= 0, ...)
  Range,       // result left the representable positive reals
  Validation,  // model/jump/config failed an assumption gate
  StepSize,    // Q * dt above the configured safety bound
  Solver,      // implicit solve did not converge
  Mesh,        // inconsistent time grid or coarsening request
  Config,      // unparseable or incomplete configuration
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// A Monte Carlo path failed; carries what is needed to replay it.
class PathFailure : public Error {
 public:
  PathFailure(ErrorKind kind, std::uint64_t seed, std::uint64_t path_index,
              const std::string& cause);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t path_index() const noexcept { return path_index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t path_index_;
};

}  // namespace jumpsde
