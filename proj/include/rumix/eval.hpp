#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rumix/learner.hpp"
#include "rumix/table.hpp"

namespace rumix {

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;  // fold of each instance

  std::vector<std::size_t> fold_sizes() const;
  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;
};

// Seeded shuffle split into k contiguous chunks; the first n % k chunks get
// one extra instance.
FoldPlan make_folds(std::size_t n_instances, std::size_t k, std::uint64_t seed);

// Seeded shuffle, grouped by class, dealt round-robin into k folds.
FoldPlan make_stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);

// Fraction of positions where prediction equals truth.
double accuracy(std::span<const int> predictions, std::span<const int> truths);

struct CvOptions {
  std::size_t k = 10;
  std::uint64_t seed = 1;
  bool stratified = true;
  std::size_t threads = 0;  // 0: RUMIX_THREADS, else hardware concurrency
};

// Worker count for `requested`; 0 means RUMIX_THREADS, else hardware
// concurrency. RUMIX_THREADS also caps an explicit request.
std::size_t resolve_threads(std::size_t requested);

// Runs task(i) for i in [0, n) on up to `threads` workers. The first
// exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& task);

struct FoldResult {
  double accuracy = 0.0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::size_t rule_count = 0;
  std::vector<std::string> warnings;
};

struct EvalReport {
  std::string dataset;
  LearnerConfig config;
  CvOptions cv;
  std::vector<FoldResult> folds;
  double wall_seconds = 0.0;

  std::vector<double> fold_accuracies() const;
  double mean_accuracy() const;  // fraction in [0, 1]
  double mean_rule_count() const;
};

// Per fold: cuts and schema come from the training partition only; the test
// partition is encoded against them.
EvalReport cross_validate(const RawTable& table, const LearnerConfig& config, const CvOptions& cv,
                          const std::string& name = {});

// Percent with two decimals, e.g. 0.71337 -> "71.34".
std::string format_percent(double fraction);

struct PublishedTable {
  std::vector<std::string> columns;
  std::map<std::string, std::vector<std::optional<double>>> rows;  // dataset -> values per column
};

// CSV with a `dataset` column followed by numeric columns; blank cells allowed.
PublishedTable load_published(const std::filesystem::path& path);

struct BenchDataset {
  std::string name;
  std::filesystem::path path;
  LoaderOptions loader;
};

struct BenchRow {
  std::string dataset;
  std::vector<std::optional<double>> computed;  // percent, one per mode
  std::string error;                            // non-empty: FAILED
  std::vector<std::optional<double>> published;
};

struct BenchTable {
  std::vector<Mode> modes;
  std::vector<std::string> published_columns;
  std::vector<BenchRow> rows;
  std::vector<EvalReport> reports;

  std::vector<std::optional<double>> computed_average() const;
  std::size_t succeeded() const;
};

BenchTable benchmark(const std::vector<BenchDataset>& datasets, const std::vector<Mode>& modes,
                     const LearnerConfig& config, const CvOptions& cv, const PublishedTable* published = nullptr);

std::string bench_csv(const BenchTable& table);
std::string bench_markdown(const BenchTable& table);

}  // namespace rumix
