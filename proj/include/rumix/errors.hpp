#pragma once

#include <stdexcept>
#include <string>

namespace rumix {

// Malformed or unreadable input: files, configs, arguments.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data does not line up with a trained model's schema.
class SchemaMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A library invariant was broken. Always a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rumix
