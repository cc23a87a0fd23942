#pragma once

#include <cstddef>
#include <vector>

#include "rumix/bitvec.hpp"
#include "rumix/rule.hpp"
#include "rumix/schema.hpp"

namespace rumix {

// fitness = alpha * accuracy + beta * coverage, alpha + beta = 1.
struct WeightProfile {
  double alpha = 0.99;
  double beta = 0.01;

  // Validates alpha, beta > 0 and alpha + beta = 1 (to 1e-9).
  static WeightProfile make(double alpha, double beta);
  // Composition profile (1 - gamma, gamma).
  static WeightProfile from_gamma(double gamma);

  double score(std::size_t n_correct, std::size_t n_covers, std::size_t n_total) const;

  friend bool operator==(const WeightProfile&, const WeightProfile&) = default;
};

// Strict improvement. Count pairs with mathematically equal fitness can round
// a few ulps apart, so a gap below 1e-12 counts as a tie.
inline bool improves(double candidate, double incumbent) { return candidate > incumbent + 1e-12; }

inline constexpr double kDefaultAlpha = 0.99;
inline constexpr double kDefaultBeta = 0.01;

struct FitnessBreakdown {
  std::size_t n_covers = 0;
  std::size_t n_correct = 0;
  double accuracy = 0.0;
  double coverage = 0.0;
  double fitness = 0.0;
};

FitnessBreakdown breakdown(std::size_t n_correct, std::size_t n_covers, std::size_t n_total,
                           const WeightProfile& profile);

// Straight per-instance recount. Throws InputError on an empty dataset.
FitnessBreakdown evaluate(const Rule& rule, const Dataset& data, const WeightProfile& profile);

// Column-wise view of a training set: for every feature bit, the set of
// instances holding that value, and for every class, its instances. Rule
// coverage becomes an AND over segments of ORs of these bitmaps.
class CoverIndex {
 public:
  explicit CoverIndex(const Dataset& data);

  std::size_t size() const { return n_; }
  const DatasetSchema& schema() const { return schema_; }
  const BitVec& with_bit(std::size_t bit) const { return by_bit_[bit]; }
  const BitVec& of_class(int c) const { return by_class_[static_cast<std::size_t>(c)]; }
  const BitVec& everyone() const { return all_; }

  // Instances whose value for feature f is accepted by the rule.
  void segment_cover(const BitVec& rule_bits, std::size_t feature, BitVec& out) const;
  BitVec cover(const BitVec& rule_bits) const;

  // Sets n_covers, n_correct and fitness on the rule.
  void evaluate(Rule& rule, const WeightProfile& profile) const;
  FitnessBreakdown breakdown(const Rule& rule, const WeightProfile& profile) const;

 private:
  DatasetSchema schema_;
  std::size_t n_;
  std::vector<BitVec> by_bit_;
  std::vector<BitVec> by_class_;
  BitVec all_;
  // Features whose every instance has a set bit (true for training data),
  // so an all-ones rule segment covers everything.
  std::vector<bool> total_segment_;
};

// Popcount of a & b and of a & b & c without materializing.
std::size_t and_count(const BitVec& a, const BitVec& b);
std::size_t and_count(const BitVec& a, const BitVec& b, const BitVec& c);

}  // namespace rumix
