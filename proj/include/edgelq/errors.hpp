#pragma once

#include <stdexcept>
#include <string>

namespace edgelq {

// Invalid or inconsistent problem description (bad file, bad field, bad
// shape). The command line maps this to exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The two-point boundary problem cannot be inverted: the boundary map is
// singular or numerically too ill-conditioned to trust. Exit code 2.
struct SingularBoundaryError : std::runtime_error {
  explicit SingularBoundaryError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace edgelq
