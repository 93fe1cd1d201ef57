#pragma once

#include <stdexcept>
#include <string>

namespace lyz {

// Input violates an operation's documented precondition.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical solve failed (stall, divergence, vanishing central charge).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lyz
