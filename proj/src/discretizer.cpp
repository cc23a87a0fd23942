#include "rumix/discretizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace rumix {

namespace {

double split_entropy_from_counts(std::span<const std::size_t> left, std::size_t n_left,
                                 std::span<const std::size_t> right, std::size_t n_right) {
  const double total = static_cast<double>(n_left + n_right);
  double value = 0.0;
  if (n_left > 0) value += static_cast<double>(n_left) / total * entropy(left);
  if (n_right > 0) value += static_cast<double>(n_right) / total * entropy(right);
  return value;
}

std::size_t class_count(std::span<const int> labels) {
  int max_label = -1;
  for (int l : labels) {
    if (l < 0) throw std::invalid_argument("class labels must be non-negative");
    max_label = std::max(max_label, l);
  }
  return static_cast<std::size_t>(max_label + 1);
}

}  // namespace

std::vector<double> candidate_midpoints(std::span<const double> sorted_values) {
  std::vector<double> out;
  for (std::size_t i = 1; i < sorted_values.size(); ++i) {
    if (sorted_values[i] < sorted_values[i - 1])
      throw std::invalid_argument("candidate_midpoints expects ascending values");
    if (sorted_values[i] != sorted_values[i - 1]) out.push_back((sorted_values[i - 1] + sorted_values[i]) / 2.0);
  }
  return out;
}

double entropy(std::span<const std::size_t> class_counts) {
  const std::size_t total = std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
  if (total == 0) throw std::invalid_argument("entropy of an empty class histogram");
  double h = 0.0;
  for (std::size_t c : class_counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double weighted_split_entropy(std::span<const double> values, std::span<const int> labels, double cut) {
  if (values.size() != labels.size()) throw std::invalid_argument("values and labels differ in length");
  if (values.empty()) throw std::invalid_argument("weighted_split_entropy of an empty feature");
  const std::size_t classes = class_count(labels);
  std::vector<std::size_t> left(classes, 0), right(classes, 0);
  std::size_t n_left = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= cut) {
      ++left[labels[i]];
      ++n_left;
    } else {
      ++right[labels[i]];
    }
  }
  return split_entropy_from_counts(left, n_left, right, values.size() - n_left);
}

std::optional<SplitCut> best_split(const std::string& feature, std::span<const double> values,
                                   std::span<const int> labels) {
  if (values.size() != labels.size()) throw std::invalid_argument("values and labels differ in length");
  const std::size_t classes = class_count(labels);

  std::vector<std::pair<double, int>> sorted(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sorted[i] = {values[i], labels[i]};
  std::sort(sorted.begin(), sorted.end());

  std::vector<std::size_t> left(classes, 0), right(classes, 0);
  for (const auto& [v, l] : sorted) ++right[l];

  std::optional<SplitCut> best;
  double best_value = 0.0;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    ++left[sorted[i].second];
    --right[sorted[i].second];
    if (sorted[i].first == sorted[i + 1].first) continue;
    const double cut = (sorted[i].first + sorted[i + 1].first) / 2.0;
    const double value = split_entropy_from_counts(left, i + 1, right, sorted.size() - i - 1);
    // Cuts arrive in ascending order; the tolerance keeps the smallest cut when
    // two entropies differ only by rounding.
    if (!best || value < best_value - 1e-12) {
      best = SplitCut{feature, cut};
      best_value = value;
    }
  }
  return best;
}

std::vector<SplitCut> discretize(const RawTable& training) {
  std::unordered_map<std::string, int> class_ids;
  std::vector<int> labels;
  labels.reserve(training.rows());
  for (const auto& cell : training.target.cells) {
    const auto [it, inserted] = class_ids.try_emplace(*cell, static_cast<int>(class_ids.size()));
    labels.push_back(it->second);
  }

  std::vector<SplitCut> cuts;
  for (const auto& col : training.features) {
    if (col.kind != ColumnKind::numeric) continue;
    std::vector<double> values;
    std::vector<int> col_labels;
    for (std::size_t r = 0; r < col.cells.size(); ++r) {
      if (!col.cells[r]) continue;
      if (auto v = parse_number(*col.cells[r])) {
        values.push_back(*v);
        col_labels.push_back(labels[r]);
      }
    }
    if (auto cut = best_split(col.name, values, col_labels)) cuts.push_back(std::move(*cut));
  }
  return cuts;
}

}  // namespace rumix
