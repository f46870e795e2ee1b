#pragma once

#include <stdexcept>

namespace pufgcc {

/// Thrown when a caller violates an operation's preconditions
/// (length mismatch, bad parameters, unknown code id).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pufgcc
