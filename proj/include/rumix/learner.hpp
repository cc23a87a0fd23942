#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rumix/discretizer.hpp"
#include "rumix/fitness.hpp"
#include "rumix/rule.hpp"
#include "rumix/schema.hpp"

namespace rumix {

enum class Mode { rumc, racer };

// sequential: flip zero bits in index order, keep each strict improvement.
// best_of_copies: try every single flip of the current rule, keep the best
// one if it is a strict improvement.
enum class MutationStrategy { sequential, best_of_copies };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);
std::string to_string(MutationStrategy s);
MutationStrategy parse_mutation_strategy(const std::string& text);

struct LearnerConfig {
  Mode mode = Mode::rumc;
  WeightProfile main_profile{kDefaultAlpha, kDefaultBeta};
  // Profile for composition acceptance; unset means the main profile.
  std::optional<WeightProfile> composition_profile;
  std::uint64_t rng_seed = 1;
  int max_composition_passes = 10;
  MutationStrategy mutation_strategy = MutationStrategy::sequential;
  // Check every greedy decision of the fit (see audit_fit). Also enabled by
  // a non-empty RUMIX_AUDIT environment variable.
  bool audit = false;
};

// Recorder for the greedy decisions of one fit. Off unless passed in.
struct FitTrace {
  struct Flip {
    std::string phase;
    std::uint64_t seq;
    std::size_t bit;
    double before;
    double after;
  };
  struct Composition {
    std::uint64_t parent_a, parent_b, child;
    double fitness_a, fitness_b, fitness_child;  // composition profile
  };
  std::vector<Flip> flips;
  std::vector<Composition> compositions;
  std::vector<Rule> removed;  // rules dropped by subsumption
  std::size_t composition_passes = 0;
  std::size_t rules_initial = 0;
  std::size_t rules_after_composition = 0;
};

// Monotone source of rule sequence numbers.
class SeqCounter {
 public:
  explicit SeqCounter(std::uint64_t next = 0) : next_(next) {}
  std::uint64_t next() { return next_++; }
  std::uint64_t peek() const { return next_; }

 private:
  std::uint64_t next_;
};

// One rule per distinct encoded training record, seq = row of first
// occurrence, evaluated with `profile`.
std::vector<Rule> initial_rules(const Dataset& data, const WeightProfile& profile);

std::vector<Rule> mutate_rules(std::vector<Rule> rules, const Dataset& data, const WeightProfile& profile,
                               MutationStrategy strategy = MutationStrategy::sequential, FitTrace* trace = nullptr);

std::vector<Rule> generalize(std::vector<Rule> rules, const Dataset& data, const WeightProfile& profile,
                             FitTrace* trace = nullptr, const std::string& phase = "generalize");

// Within-class pairwise OR composition with subsumption removal. Output
// rules carry main-profile fitness.
std::vector<Rule> compose_phase(std::vector<Rule> rules, const Dataset& data, const WeightProfile& composition_profile,
                                const WeightProfile& main_profile, std::mt19937_64& rng, SeqCounter& seq,
                                int max_passes, FitTrace* trace = nullptr);

// Fitness descending, seq ascending on ties.
void sort_rules(std::vector<Rule>& rules);

// Keeps the lowest-seq copy of each identical (bits, class) rule.
void drop_duplicates(std::vector<Rule>& rules);

struct Classifier {
  DatasetSchema schema;
  std::vector<SplitCut> cuts;
  std::vector<Rule> rules;
  int default_class = 0;
  LearnerConfig config;
  std::string class_column;

  // Index of the first rule covering x.
  std::optional<std::size_t> match(const EncodedInstance& x) const;
  int predict(const EncodedInstance& x) const;
};

// `data` must be encoded with a schema built from its own rows; `cuts` are
// carried into the classifier for encoding new data.
Classifier fit(const Dataset& data, const LearnerConfig& config, std::vector<SplitCut> cuts = {},
               FitTrace* trace = nullptr);

// Throws InvariantViolation unless: every recorded flip strictly raised its
// rule's fitness and each rule's fitness sequence never dropped; every
// composition beat both parents; every rule removed by subsumption is
// subsumed by a final rule; every final rule covers a training instance; the
// rules are in (fitness desc, seq asc) order.
void audit_fit(const FitTrace& trace, const Classifier& clf, const Dataset& data);

// Discretize, build schema, encode and fit.
Classifier fit_table(const RawTable& table, const LearnerConfig& config, FitTrace* trace = nullptr);

// Encodes every row of `table` against the classifier's schema and predicts.
std::vector<int> predict_table(const Classifier& clf, const RawTable& table);

// Deterministic Fisher-Yates on top of mt19937_64 (std::shuffle's output is
// not specified across standard libraries).
template <class T>
void seeded_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do r = rng();
    while (r >= limit);
    std::swap(items[i - 1], items[static_cast<std::size_t>(r % bound)]);
  }
}

}  // namespace rumix
