#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rumix/errors.hpp"
#include "rumix/fitness.hpp"

using namespace rumix;

TEST_CASE("weight profiles") {
  WeightProfile main;
  CHECK(main.alpha == 0.99);
  CHECK(main.beta == 0.01);
  CHECK(main.score(10, 10, 100) == doctest::Approx(0.991));
  CHECK(main.score(0, 0, 100) == 0.0);
  const auto comp = WeightProfile::from_gamma(0.6);
  CHECK(comp.alpha == doctest::Approx(0.4));
  CHECK(comp.beta == doctest::Approx(0.6));
  CHECK_THROWS_AS(WeightProfile::make(0.5, 0.6), InputError);
  CHECK_THROWS_AS(WeightProfile::make(1.0, 0.0), InputError);
  CHECK_THROWS_AS(WeightProfile::make(-0.1, 1.1), InputError);
}

TEST_CASE("breakdown arithmetic") {
  const auto b = breakdown(1, 1, 10, WeightProfile{});
  CHECK(b.accuracy == 1.0);
  CHECK(b.coverage == doctest::Approx(0.1));
  CHECK(b.fitness == doctest::Approx(0.9910));
  CHECK(breakdown(0, 0, 10, WeightProfile{}).fitness == 0.0);
}

TEST_CASE("all-ones rule on a toy set scores the majority fraction") {
  std::istringstream in("a,b,c\nx,u,p\ny,u,p\nx,v,q\ny,v,p\nx,u,p\ny,u,q\nx,v,p\ny,v,p\nx,u,q\ny,u,p\n");
  const auto d = oracle::encode(load_csv(in));
  Rule r;
  r.bits = BitVec(d.schema.total_width());
  r.bits.set_range(0, d.schema.class_offset());
  r.class_index = d.majority_class;
  r.bits.set(d.schema.class_offset() + static_cast<std::size_t>(r.class_index));
  const auto b = evaluate(r, d, WeightProfile{});
  CHECK(b.coverage == 1.0);
  CHECK(b.accuracy == doctest::Approx(0.7));
  const auto o = oracle::score(oracle::unpack(r.bits), r.class_index, d, 0.99, 0.01);
  CHECK(b.fitness == doctest::Approx(o.fitness));
}

TEST_CASE("fast fitness equals the per-instance recount on random data") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto t = oracle::random_table(rng, 30, 4, 3, trial % 2 == 0);
    const auto d = oracle::encode(t);
    const CoverIndex index(d);
    Rule r;
    r.bits = BitVec(d.schema.total_width());
    for (std::size_t b = 0; b < d.schema.class_offset(); ++b)
      if (rng() % 2) r.bits.set(b);
    r.class_index = static_cast<int>(rng() % d.schema.class_count());
    r.bits.set(d.schema.class_offset() + static_cast<std::size_t>(r.class_index));
    const WeightProfile profile = WeightProfile::make(0.7, 0.3);

    const auto o = oracle::score(oracle::unpack(r.bits), r.class_index, d, 0.7, 0.3);
    const auto slow = evaluate(r, d, profile);
    index.evaluate(r, profile);
    CHECK(r.evaluated);
    CHECK(r.n_covers == o.covers);
    CHECK(r.n_correct == o.correct);
    CHECK(slow.n_covers == o.covers);
    CHECK(r.fitness == doctest::Approx(o.fitness).epsilon(1e-12));
    CHECK(slow.fitness == doctest::Approx(o.fitness).epsilon(1e-12));
  }
}

TEST_CASE("evaluation is pure") {
  std::mt19937_64 rng(1);
  const auto d = oracle::encode(oracle::random_table(rng, 20, 3, 3));
  Rule r = make_rule(d.instances[0], 0);
  const CoverIndex index(d);
  const auto a = index.breakdown(r, WeightProfile{});
  const auto b = index.breakdown(r, WeightProfile{});
  CHECK(a.fitness == b.fitness);
  CHECK(a.n_covers >= 1);
}

TEST_CASE("and_count") {
  const auto a = BitVec::from_string("1101");
  const auto b = BitVec::from_string("0111");
  const auto c = BitVec::from_string("0011");
  CHECK(and_count(a, b) == 2);
  CHECK(and_count(a, b, c) == 1);
}

TEST_CASE("empty dataset is an input error") {
  Dataset d;
  CHECK_THROWS_AS(evaluate(Rule{}, d, WeightProfile{}), InputError);
}
