#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rumix/errors.hpp"
#include "rumix/learner.hpp"

using namespace rumix;

namespace {

Dataset from_csv(const std::string& text) {
  std::istringstream in(text);
  return oracle::encode(load_csv(in));
}

// Six rows over two ternary features; class p iff a != z.
const char* kToy = "a,b,c\nx,u,p\ny,v,p\nz,w,q\nx,w,p\nz,u,q\ny,u,p\n";

}  // namespace

TEST_CASE("initial rules deduplicate identical records") {
  const auto d = from_csv("a,c\nx,p\nx,p\ny,q\nx,q\n");
  const auto rules = initial_rules(d, WeightProfile{});
  REQUIRE(rules.size() == 3);
  CHECK(rules[0].seq == 0);
  CHECK(rules[1].seq == 2);
  CHECK(rules[2].seq == 3);  // same features as row 0, other class: kept
  CHECK(rules[0].n_covers == 3);
  CHECK(rules[0].n_correct == 2);
  for (std::size_t i = 0; i < rules.size(); ++i) CHECK(rules[i].evaluated);
}

TEST_CASE("one-row dataset gives a perfect rule") {
  const auto d = from_csv("a,c\nx,p\n");
  const auto rules = initial_rules(d, WeightProfile{});
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].fitness == doctest::Approx(1.0));
  CHECK_THROWS_AS(initial_rules(Dataset{}, WeightProfile{}), InputError);
}

TEST_CASE("generalization on the toy set matches the replay oracle") {
  const auto d = from_csv(kToy);
  const auto start = initial_rules(d, WeightProfile{});
  const auto out = generalize(start, d, WeightProfile{});
  for (std::size_t i = 0; i < start.size(); ++i) {
    const auto want = oracle::greedy_replay(oracle::unpack(start[i].bits), start[i].class_index, d, 0.99, 0.01);
    CHECK(oracle::unpack(out[i].bits) == want);
    CHECK(out[i].seq == start[i].seq);
    CHECK(out[i].fitness >= start[i].fitness);
  }
  // Row 0 (x,u,p) must open up feature b entirely and a to {x,y}.
  CHECK(render(out[0], d.schema) == "if (a=x or y) then p");
}

TEST_CASE("mutation and generalization match the replay oracle on random data") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = oracle::encode(oracle::random_table(rng, 30, 4, 3, trial % 3 == 0));
    const auto start = initial_rules(d, WeightProfile{});
    const auto mutated = mutate_rules(start, d, WeightProfile{});
    const auto general = generalize(mutated, d, WeightProfile{});
    REQUIRE(mutated.size() == start.size());
    for (std::size_t i = 0; i < start.size(); ++i) {
      const auto m = oracle::greedy_replay(oracle::unpack(start[i].bits), start[i].class_index, d, 0.99, 0.01);
      CHECK(oracle::unpack(mutated[i].bits) == m);
      const auto g = oracle::greedy_replay(m, start[i].class_index, d, 0.99, 0.01);
      CHECK(oracle::unpack(general[i].bits) == g);
      CHECK(general[i].fitness == doctest::Approx(oracle::score(g, start[i].class_index, d, 0.99, 0.01).fitness));
    }
  }
}

TEST_CASE("best-of-copies mutation takes the single best flip") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = oracle::encode(oracle::random_table(rng, 30, 4, 3));
    const auto start = initial_rules(d, WeightProfile{});
    const auto out = mutate_rules(start, d, WeightProfile{}, MutationStrategy::best_of_copies);
    for (std::size_t i = 0; i < start.size(); ++i) {
      auto base = oracle::unpack(start[i].bits);
      double best = oracle::score(base, start[i].class_index, d, 0.99, 0.01).fitness;
      auto want = base;
      for (std::size_t b = 0; b < d.schema.class_offset(); ++b) {
        if (base[b]) continue;
        auto t = base;
        t[b] = true;
        const double f = oracle::score(t, start[i].class_index, d, 0.99, 0.01).fitness;
        if (f > best) {
          best = f;
          want = t;
        }
      }
      CHECK(oracle::unpack(out[i].bits) == want);
    }
  }
}

TEST_CASE("a rule whose every flip hurts is left alone") {
  const auto d = from_csv("a,c\nx,p\ny,q\n");
  const auto start = initial_rules(d, WeightProfile{});
  const auto out = mutate_rules(start, d, WeightProfile{});
  CHECK(out[0].bits == start[0].bits);
  CHECK(out[1].bits == start[1].bits);
}

TEST_CASE("composition merges two rules that beat their parents") {
  const auto d = from_csv("a,b,c\nx,u,p\ny,u,p\nz,v,q\n");
  auto rules = initial_rules(d, WeightProfile{});
  std::mt19937_64 rng(1);
  SeqCounter seq(100);
  FitTrace trace;
  const auto out = compose_phase(rules, d, WeightProfile{}, WeightProfile{}, rng, seq, 10, &trace);
  REQUIRE(out.size() == 2);
  REQUIRE(trace.compositions.size() == 1);
  CHECK(trace.compositions[0].child == 100);
  CHECK(trace.compositions[0].fitness_child > trace.compositions[0].fitness_a);
  const auto merged = std::find_if(out.begin(), out.end(), [](const Rule& r) { return r.seq == 100; });
  REQUIRE(merged != out.end());
  CHECK(merged->n_covers == 2);
}

TEST_CASE("group of one rule is unchanged") {
  const auto d = from_csv("a,c\nx,p\ny,q\n");
  const auto rules = initial_rules(d, WeightProfile{});
  std::mt19937_64 rng(1);
  SeqCounter seq(2);
  const auto out = compose_phase(rules, d, WeightProfile{}, WeightProfile{}, rng, seq, 10);
  CHECK(out.size() == 2);
  CHECK(seq.peek() == 2);
  CHECK_THROWS_AS(compose_phase(rules, d, WeightProfile{}, WeightProfile{}, rng, seq, 0), InputError);
}

TEST_CASE("composition is deterministic and only removes subsumed rules") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = oracle::encode(oracle::random_table(gen, 30, 4, 3));
    const auto start = initial_rules(d, WeightProfile{});
    const auto profile = trial % 2 ? WeightProfile::from_gamma(0.6) : WeightProfile{};
    auto run = [&](FitTrace* trace) {
      std::mt19937_64 rng(8);
      SeqCounter seq(d.size());
      return compose_phase(start, d, profile, WeightProfile{}, rng, seq, 10, trace);
    };
    FitTrace trace;
    const auto a = run(&trace);
    const auto b = run(nullptr);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].bits == b[i].bits);
      CHECK(a[i].seq == b[i].seq);
      CHECK(a[i].fitness == b[i].fitness);
    }
    CHECK(a.size() <= start.size());
    CHECK(trace.composition_passes <= 10);
    for (const auto& c : trace.compositions) {
      CHECK(c.fitness_child > c.fitness_a);
      CHECK(c.fitness_child > c.fitness_b);
    }
    for (const auto& gone : trace.removed) {
      const bool held = std::any_of(a.begin(), a.end(), [&](const Rule& g) { return subsumes(g, gone); });
      CHECK(held);
    }
    // Final fitness is main-profile fitness.
    for (const auto& r : a)
      CHECK(r.fitness == doctest::Approx(WeightProfile{}.score(r.n_correct, r.n_covers, d.size())));
  }
}

TEST_CASE("sort and drop_duplicates") {
  std::vector<Rule> rules(4);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    rules[i].bits = BitVec::from_string(i == 3 ? "1010" : (i == 1 ? "1001" : "0110"));
    rules[i].seq = 10 - i;
  }
  rules[0].fitness = 0.5;
  rules[1].fitness = 0.9;
  rules[2].fitness = 0.5;
  rules[3].fitness = 0.5;
  drop_duplicates(rules);  // rules 0 and 2 are equal; seq 8 beats seq 10
  REQUIRE(rules.size() == 3);
  sort_rules(rules);
  CHECK(rules[0].seq == 9);
  CHECK(rules[1].seq == 7);
  CHECK(rules[2].seq == 8);
}

TEST_CASE("single-class data yields a rule predicting that class everywhere") {
  const auto d = from_csv("a,b,c\nx,u,p\ny,v,p\nz,u,p\n");
  const auto clf = fit(d, LearnerConfig{});
  REQUIRE_FALSE(clf.rules.empty());
  CHECK(clf.rules[0].n_covers == 3);
  CHECK(clf.rules[0].n_correct == 3);
  CHECK(render(clf.rules[0], d.schema) == "if true then p");
}

TEST_CASE("fit on the toy set learns the concept and survives an audit") {
  const auto d = from_csv(kToy);
  LearnerConfig config;
  config.audit = true;
  for (Mode mode : {Mode::rumc, Mode::racer}) {
    config.mode = mode;
    FitTrace trace;
    const auto clf = fit(d, config, {}, &trace);
    for (const auto& x : d.instances) CHECK(clf.predict(x) == x.class_index);
    CHECK(trace.rules_initial == 6);
    for (std::size_t i = 1; i < clf.rules.size(); ++i) {
      const auto& a = clf.rules[i - 1];
      const auto& b = clf.rules[i];
      CHECK((a.fitness > b.fitness || (a.fitness == b.fitness && a.seq < b.seq)));
    }
    if (mode == Mode::racer)
      CHECK(std::none_of(trace.flips.begin(), trace.flips.end(), [](const auto& f) { return f.phase == "mutation"; }));
  }
  CHECK_THROWS_AS(fit(Dataset{}, config), InputError);
}

TEST_CASE("audit rejects a doctored trace") {
  const auto d = from_csv(kToy);
  FitTrace trace;
  const auto clf = fit(d, LearnerConfig{}, {}, &trace);
  CHECK_NOTHROW(audit_fit(trace, clf, d));
  auto bad = trace;
  bad.flips.push_back({"primary", 0, 0, 0.5, 0.5});
  CHECK_THROWS_AS(audit_fit(bad, clf, d), InvariantViolation);
  bad = trace;
  bad.compositions.push_back({0, 1, 2, 0.9, 0.1, 0.5});
  CHECK_THROWS_AS(audit_fit(bad, clf, d), InvariantViolation);
  auto swapped = clf;
  if (swapped.rules.size() > 1) {
    std::swap(swapped.rules.front(), swapped.rules.back());
    if (swapped.rules.front().fitness != swapped.rules.back().fitness)
      CHECK_THROWS_AS(audit_fit(trace, swapped, d), InvariantViolation);
  }
}

TEST_CASE("no match falls back to the default class") {
  const auto d = from_csv(kToy);
  const auto clf = fit(d, LearnerConfig{});
  EncodedInstance x{BitVec(d.schema.total_width()), -1};
  CHECK_FALSE(clf.match(x));
  CHECK(clf.predict(x) == clf.default_class);
  CHECK(clf.default_class == d.majority_class);
}

TEST_CASE("fit is deterministic for a seed") {
  std::mt19937_64 gen(12);
  const auto d = oracle::encode(oracle::random_table(gen, 30, 4, 3));
  LearnerConfig config;
  config.rng_seed = 99;
  const auto a = fit(d, config);
  const auto b = fit(d, config);
  REQUIRE(a.rules.size() == b.rules.size());
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    CHECK(a.rules[i].bits == b.rules[i].bits);
    CHECK(a.rules[i].seq == b.rules[i].seq);
  }
}

TEST_CASE("mode and strategy names") {
  CHECK(parse_mode("rumc") == Mode::rumc);
  CHECK(parse_mode("racer") == Mode::racer);
  CHECK(to_string(Mode::racer) == "racer");
  CHECK_THROWS_AS(parse_mode("RUMC!"), InputError);
  CHECK(parse_mutation_strategy(to_string(MutationStrategy::best_of_copies)) == MutationStrategy::best_of_copies);
  CHECK_THROWS_AS(parse_mutation_strategy("random"), InputError);
}

TEST_CASE("seeded shuffle is a deterministic permutation") {
  std::vector<int> a(50), b;
  for (int i = 0; i < 50; ++i) a[static_cast<std::size_t>(i)] = i;
  b = a;
  std::mt19937_64 r1(3), r2(3);
  seeded_shuffle(a, r1);
  seeded_shuffle(b, r2);
  CHECK(a == b);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
}
