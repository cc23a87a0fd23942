#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rumix/table.hpp"

namespace rumix {

// Binary cut of a numeric feature: bin 0 holds values <= cut_value, bin 1
// holds values > cut_value.
struct SplitCut {
  std::string feature;
  double cut_value = 0.0;

  friend bool operator==(const SplitCut&, const SplitCut&) = default;
};

// Midpoints between adjacent distinct values of an ascending sequence.
std::vector<double> candidate_midpoints(std::span<const double> sorted_values);

// Shannon entropy in bits of a class histogram. Throws on an all-zero histogram.
double entropy(std::span<const std::size_t> class_counts);

// Size-weighted entropy of the partition {x <= cut}, {x > cut}.
double weighted_split_entropy(std::span<const double> values, std::span<const int> labels, double cut);

// Entropy-minimizing midpoint; ties go to the smallest cut. nullopt when the
// feature has fewer than two distinct values.
std::optional<SplitCut> best_split(const std::string& feature, std::span<const double> values,
                                   std::span<const int> labels);

// Cuts for every numeric feature of a training table. Missing cells are
// skipped. Features without a usable cut are absent from the result.
std::vector<SplitCut> discretize(const RawTable& training);

}  // namespace rumix
