#pragma once

#include <stdexcept>
#include <string>

namespace qz {

// Bad input: wrong parity, out-of-range parameter, precondition violated.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical solver did not deliver: divergence, singular system, bracket failure.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qz
