#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "rumix/bitvec.hpp"
#include "rumix/schema.hpp"

namespace rumix {

// A conjunction over feature values plus a one-hot class segment. A set bit
// in a feature segment means the value is accepted.
struct Rule {
  BitVec bits;
  int class_index = 0;
  std::uint64_t seq = 0;

  // Cached evaluation on the training data; `evaluated` is false after any
  // change to `bits`.
  bool evaluated = false;
  std::size_t n_covers = 0;
  std::size_t n_correct = 0;
  double fitness = 0.0;

  void invalidate() {
    evaluated = false;
    n_covers = n_correct = 0;
    fitness = 0.0;
  }
};

class RuleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Rule whose bits are exactly the instance's bits.
Rule make_rule(const EncodedInstance& x, std::uint64_t seq);

// Every feature segment of rule & instance is nonzero. The class segment is
// not consulted.
bool covers(const Rule& rule, const EncodedInstance& x, const DatasetSchema& schema);

// Bitwise OR of two rules of the same class; the result is unevaluated.
Rule compose(const Rule& a, const Rule& b, std::uint64_t seq);

// Copy of `rule` with feature bit `bit` set. Throws RuleError("class
// conflict") for a class bit and RuleError for a bit that is already set.
Rule flip_zero_bit(const Rule& rule, std::size_t bit, const DatasetSchema& schema);

// Same class and every bit of `specific` is set in `general`.
bool subsumes(const Rule& general, const Rule& specific);

// "if F2=clear and (F5=medium or high) then yes"; all-ones segments omitted.
std::string render(const Rule& rule, const DatasetSchema& schema);

// Rule invariants: one class bit matching class_index, every feature
// segment non-empty. Throws InvariantViolation.
void check_rule(const Rule& rule, const DatasetSchema& schema);

}  // namespace rumix
