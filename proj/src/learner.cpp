#include "rumix/learner.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <unordered_map>

#include "rumix/errors.hpp"

namespace rumix {

namespace {

// Incremental single-bit flip search over one rule. Keeps the per-feature
// segment covers and, for each feature, the AND of every other segment, so a
// candidate flip costs two popcounts over the instance bitmaps.
class FlipScanner {
 public:
  FlipScanner(const CoverIndex& index, const WeightProfile& profile)
      : index_(index), profile_(profile), features_(index.schema().feature_count()) {
    const std::size_t n = index.size();
    seg_.assign(features_, BitVec(n));
    excl_.assign(features_, BitVec(n));
    suffix_.assign(features_ + 1, BitVec(n));
  }

  void sequential(Rule& rule, FitTrace* trace, const std::string& phase) {
    load(rule);
    const auto& owner = index_.schema().bit_owner();
    const std::size_t feature_bits = index_.schema().class_offset();
    for (std::size_t b = 0; b < feature_bits; ++b) {
      if (rule.bits.test(b)) continue;
      const std::size_t f = owner[b];
      std::size_t n_covers = 0, n_correct = 0;
      if (!candidate(rule, b, f, n_covers, n_correct)) continue;
      const double fit = profile_.score(n_correct, n_covers, index_.size());
      if (improves(fit, rule.fitness)) accept(rule, b, f, n_covers, n_correct, fit, trace, phase);
    }
  }

  void best_of_copies(Rule& rule, FitTrace* trace, const std::string& phase) {
    load(rule);
    const auto& owner = index_.schema().bit_owner();
    const std::size_t feature_bits = index_.schema().class_offset();
    std::optional<std::size_t> best_bit;
    std::size_t best_covers = 0, best_correct = 0;
    double best_fit = rule.fitness;
    for (std::size_t b = 0; b < feature_bits; ++b) {
      if (rule.bits.test(b)) continue;
      std::size_t n_covers = 0, n_correct = 0;
      if (!candidate(rule, b, owner[b], n_covers, n_correct)) continue;
      const double fit = profile_.score(n_correct, n_covers, index_.size());
      if (improves(fit, best_fit)) {
        best_bit = b;
        best_fit = fit;
        best_covers = n_covers;
        best_correct = n_correct;
      }
    }
    if (best_bit) accept(rule, *best_bit, owner[*best_bit], best_covers, best_correct, best_fit, trace, phase);
  }

 private:
  void load(const Rule& rule) {
    for (std::size_t f = 0; f < features_; ++f) index_.segment_cover(rule.bits, f, seg_[f]);
    refresh();
  }

  void refresh() {
    suffix_[features_] = index_.everyone();
    for (std::size_t f = features_; f-- > 0;) {
      suffix_[f] = suffix_[f + 1];
      suffix_[f] &= seg_[f];
    }
    BitVec prefix = index_.everyone();
    for (std::size_t f = 0; f < features_; ++f) {
      excl_[f] = prefix;
      excl_[f] &= suffix_[f + 1];
      prefix &= seg_[f];
    }
  }

  // Counts after setting bit b of feature f. Instances holding value b are
  // outside the current cover, so the gain is disjoint from it.
  bool candidate(const Rule& rule, std::size_t b, std::size_t f, std::size_t& n_covers,
                 std::size_t& n_correct) const {
    const std::size_t gain = and_count(excl_[f], index_.with_bit(b));
    if (gain == 0) return false;
    n_covers = rule.n_covers + gain;
    n_correct = rule.n_correct + and_count(excl_[f], index_.with_bit(b), index_.of_class(rule.class_index));
    return true;
  }

  void accept(Rule& rule, std::size_t b, std::size_t f, std::size_t n_covers, std::size_t n_correct, double fit,
              FitTrace* trace, const std::string& phase) {
    if (trace) trace->flips.push_back({phase, rule.seq, b, rule.fitness, fit});
    rule.bits.set(b);
    rule.n_covers = n_covers;
    rule.n_correct = n_correct;
    rule.fitness = fit;
    seg_[f] |= index_.with_bit(b);
    refresh();
  }

  const CoverIndex& index_;
  WeightProfile profile_;
  std::size_t features_;
  std::vector<BitVec> seg_;
  std::vector<BitVec> excl_;
  std::vector<BitVec> suffix_;
};

void ensure_evaluated(std::vector<Rule>& rules, const CoverIndex& index, const WeightProfile& profile) {
  for (auto& r : rules)
    if (!r.evaluated) index.evaluate(r, profile);
}

void rescore(std::vector<Rule>& rules, const WeightProfile& profile, std::size_t n) {
  for (auto& r : rules) r.fitness = profile.score(r.n_correct, r.n_covers, n);
}

// One class group of the composition phase. Returns true if any pair merged.
bool composition_pass(std::vector<Rule>& group, const CoverIndex& index, const WeightProfile& profile,
                      SeqCounter& seq, FitTrace* trace) {
  const std::size_t n = index.size();
  auto score = [&](const Rule& r) { return profile.score(r.n_correct, r.n_covers, n); };
  bool changed = false;
  for (std::size_t i = 0; i < group.size(); ++i) {
    std::size_t j = i + 1;
    while (j < group.size()) {
      const Rule& a = group[i];
      const Rule& b = group[j];
      BitVec merged = a.bits | b.bits;
      // An OR equal to a parent cannot beat that parent.
      if (merged == a.bits || merged == b.bits) {
        ++j;
        continue;
      }
      const BitVec cover = index.cover(merged);
      const std::size_t n_covers = cover.count();
      const std::size_t n_correct = and_count(cover, index.of_class(a.class_index));
      const double fa = score(a), fb = score(b);
      const double fc = profile.score(n_correct, n_covers, n);
      if (!(improves(fc, fa) && improves(fc, fb))) {
        ++j;
        continue;
      }
      Rule composed;
      composed.bits = std::move(merged);
      composed.class_index = a.class_index;
      composed.seq = seq.next();
      composed.n_covers = n_covers;
      composed.n_correct = n_correct;
      composed.fitness = fc;
      composed.evaluated = true;
      if (trace) trace->compositions.push_back({a.seq, b.seq, composed.seq, fa, fb, fc});

      // Composed takes slot i; parent b and everything the composed rule
      // subsumes leave the group.
      std::vector<Rule> next;
      next.reserve(group.size() - 1);
      std::size_t new_i = 0;
      for (std::size_t k = 0; k < group.size(); ++k) {
        if (k == i) {
          new_i = next.size();
          next.push_back(composed);
          continue;
        }
        if (k == j) continue;
        if (subsumes(composed, group[k])) {
          if (trace) trace->removed.push_back(group[k]);
          continue;
        }
        next.push_back(std::move(group[k]));
      }
      group = std::move(next);
      i = new_i;
      j = i + 1;
      changed = true;
    }
  }
  return changed;
}

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::rumc ? "rumc" : "racer"; }

Mode parse_mode(const std::string& text) {
  if (text == "rumc") return Mode::rumc;
  if (text == "racer") return Mode::racer;
  throw InputError("unknown mode '" + text + "' (expected rumc or racer)");
}

std::string to_string(MutationStrategy s) {
  return s == MutationStrategy::sequential ? "sequential" : "best_of_copies";
}

MutationStrategy parse_mutation_strategy(const std::string& text) {
  if (text == "sequential") return MutationStrategy::sequential;
  if (text == "best_of_copies") return MutationStrategy::best_of_copies;
  throw InputError("unknown mutation strategy '" + text + "'");
}

std::vector<Rule> initial_rules(const Dataset& data, const WeightProfile& profile) {
  if (data.instances.empty()) throw InputError("cannot build rules from an empty dataset");
  const CoverIndex index(data);
  std::vector<Rule> rules;
  std::unordered_map<BitVec, std::size_t, BitVecHash> seen;
  for (std::size_t i = 0; i < data.instances.size(); ++i) {
    if (!seen.try_emplace(data.instances[i].bits, i).second) continue;
    rules.push_back(make_rule(data.instances[i], i));
  }
  for (auto& r : rules) index.evaluate(r, profile);
  return rules;
}

std::vector<Rule> mutate_rules(std::vector<Rule> rules, const Dataset& data, const WeightProfile& profile,
                               MutationStrategy strategy, FitTrace* trace) {
  const CoverIndex index(data);
  ensure_evaluated(rules, index, profile);
  rescore(rules, profile, index.size());
  FlipScanner scanner(index, profile);
  for (auto& r : rules) {
    if (strategy == MutationStrategy::sequential)
      scanner.sequential(r, trace, "mutation");
    else
      scanner.best_of_copies(r, trace, "mutation");
  }
  return rules;
}

std::vector<Rule> generalize(std::vector<Rule> rules, const Dataset& data, const WeightProfile& profile,
                             FitTrace* trace, const std::string& phase) {
  const CoverIndex index(data);
  ensure_evaluated(rules, index, profile);
  rescore(rules, profile, index.size());
  FlipScanner scanner(index, profile);
  for (auto& r : rules) scanner.sequential(r, trace, phase);
  return rules;
}

std::vector<Rule> compose_phase(std::vector<Rule> rules, const Dataset& data, const WeightProfile& composition_profile,
                                const WeightProfile& main_profile, std::mt19937_64& rng, SeqCounter& seq,
                                int max_passes, FitTrace* trace) {
  if (max_passes < 1) throw InputError("max_composition_passes must be >= 1");
  const CoverIndex index(data);
  ensure_evaluated(rules, index, main_profile);
  drop_duplicates(rules);

  std::map<int, std::vector<Rule>> groups;
  for (auto& r : rules) groups[r.class_index].push_back(std::move(r));

  std::vector<Rule> out;
  std::size_t passes_used = 0;
  for (auto& [cls, group] : groups) {
    seeded_shuffle(group, rng);
    std::size_t passes = 0;
    while (passes < static_cast<std::size_t>(max_passes)) {
      ++passes;
      if (!composition_pass(group, index, composition_profile, seq, trace)) break;
    }
    passes_used = std::max(passes_used, passes);
    for (auto& r : group) out.push_back(std::move(r));
  }
  rescore(out, main_profile, index.size());
  if (trace) {
    trace->composition_passes = passes_used;
    trace->rules_after_composition = out.size();
  }
  return out;
}

void sort_rules(std::vector<Rule>& rules) {
  std::sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    return a.seq < b.seq;
  });
}

void drop_duplicates(std::vector<Rule>& rules) {
  std::unordered_map<BitVec, std::size_t, BitVecHash> keep;  // bits -> index in rules
  std::vector<bool> dead(rules.size(), false);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    auto [it, inserted] = keep.try_emplace(rules[i].bits, i);
    if (inserted) continue;
    // Class bits are part of `bits`, so equal bits means equal class.
    if (rules[i].seq < rules[it->second].seq) {
      dead[it->second] = true;
      it->second = i;
    } else {
      dead[i] = true;
    }
  }
  std::vector<Rule> out;
  out.reserve(keep.size());
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (!dead[i]) out.push_back(std::move(rules[i]));
  rules = std::move(out);
}

std::optional<std::size_t> Classifier::match(const EncodedInstance& x) const {
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (covers(rules[i], x, schema)) return i;
  return std::nullopt;
}

int Classifier::predict(const EncodedInstance& x) const {
  if (auto i = match(x)) return rules[*i].class_index;
  return default_class;
}

Classifier fit(const Dataset& data, const LearnerConfig& config, std::vector<SplitCut> cuts, FitTrace* trace) {
  if (data.instances.empty()) throw InputError("cannot fit an empty dataset");
  const char* env = std::getenv("RUMIX_AUDIT");
  const bool audit = config.audit || (env && *env);
  FitTrace local;
  if (audit && !trace) trace = &local;
  std::vector<Rule> rules = initial_rules(data, config.main_profile);
  if (trace) trace->rules_initial = rules.size();
  if (config.mode == Mode::rumc)
    rules = mutate_rules(std::move(rules), data, config.main_profile, config.mutation_strategy, trace);
  rules = generalize(std::move(rules), data, config.main_profile, trace, "primary");

  std::mt19937_64 rng(config.rng_seed);
  SeqCounter seq(data.instances.size());
  rules = compose_phase(std::move(rules), data, config.composition_profile.value_or(config.main_profile), config.main_profile, rng, seq,
                        config.max_composition_passes, trace);
  rules = generalize(std::move(rules), data, config.main_profile, trace, "secondary");
  drop_duplicates(rules);
  sort_rules(rules);

  Classifier clf;
  clf.schema = data.schema;
  clf.cuts = std::move(cuts);
  clf.rules = std::move(rules);
  clf.default_class = data.majority_class;
  clf.config = config;
  if (audit) audit_fit(*trace, clf, data);
  return clf;
}

void audit_fit(const FitTrace& trace, const Classifier& clf, const Dataset& data) {
  auto fail = [](const std::string& what) { throw InvariantViolation("audit: " + what); };

  std::unordered_map<std::uint64_t, double> last;
  for (const auto& f : trace.flips) {
    if (!(f.after > f.before))
      fail("flip of bit " + std::to_string(f.bit) + " on rule " + std::to_string(f.seq) + " in " + f.phase +
           " did not raise fitness");
    if (auto it = last.find(f.seq); it != last.end() && f.before < it->second)
      fail("fitness of rule " + std::to_string(f.seq) + " dropped between flips");
    last[f.seq] = f.after;
  }
  for (const auto& c : trace.compositions)
    if (!(c.fitness_child > c.fitness_a && c.fitness_child > c.fitness_b))
      fail("composed rule " + std::to_string(c.child) + " does not beat both parents");
  for (const auto& r : trace.removed) {
    const bool held = std::any_of(clf.rules.begin(), clf.rules.end(), [&](const Rule& g) { return subsumes(g, r); });
    if (!held) fail("removed rule " + std::to_string(r.seq) + " is not subsumed by any surviving rule");
  }
  const CoverIndex index(data);
  for (const auto& r : clf.rules) {
    check_rule(r, clf.schema);
    if (index.cover(r.bits).count() == 0) fail("rule " + std::to_string(r.seq) + " covers no training instance");
  }
  for (std::size_t i = 1; i < clf.rules.size(); ++i) {
    const Rule& a = clf.rules[i - 1];
    const Rule& b = clf.rules[i];
    if (!(a.fitness > b.fitness || (a.fitness == b.fitness && a.seq < b.seq))) fail("rule order broken");
  }
}

Classifier fit_table(const RawTable& table, const LearnerConfig& config, FitTrace* trace) {
  auto cuts = discretize(table);
  const DatasetSchema schema = build_schema(table, cuts);
  const Dataset data = encode_dataset(table, schema);
  Classifier clf = fit(data, config, std::move(cuts), trace);
  clf.class_column = table.target.name;
  return clf;
}

std::vector<int> predict_table(const Classifier& clf, const RawTable& table) {
  const auto rows = encode_rows(table, clf.schema, EncodeMode::predict);
  std::vector<int> out;
  out.reserve(rows.size());
  for (const auto& x : rows) out.push_back(clf.predict(x));
  return out;
}

}  // namespace rumix
