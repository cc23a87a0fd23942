#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rumix/discretizer.hpp"

using namespace rumix;

TEST_CASE("candidate midpoints") {
  CHECK(candidate_midpoints(std::vector<double>{1.0, 3.0}) == std::vector<double>{2.0});
  CHECK(candidate_midpoints(std::vector<double>{5.0}).empty());
  CHECK(candidate_midpoints(std::vector<double>{1.0, 1.0, 2.0, 4.0}) == std::vector<double>{1.5, 3.0});
  CHECK(candidate_midpoints(std::vector<double>{}).empty());
}

TEST_CASE("entropy of class histograms") {
  CHECK(entropy(std::vector<std::size_t>{5, 5}) == doctest::Approx(1.0));
  CHECK(entropy(std::vector<std::size_t>{7, 0}) == 0.0);
  // -(3/4) log2(3/4) - (1/4) log2(1/4) = 2 - (3/4) log2 3
  const long double expected = 2.0L - 0.75L * std::log2(3.0L);
  CHECK(std::fabs(entropy(std::vector<std::size_t>{3, 1}) - static_cast<double>(expected)) < 1e-9);
  CHECK(std::fabs(static_cast<double>(expected) - 0.8112781244591328) < 1e-12);
  CHECK_THROWS(entropy(std::vector<std::size_t>{0, 0}));
}

TEST_CASE("weighted split entropy") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(weighted_split_entropy(v, std::vector<int>{0, 0, 1, 1}, 2.5) == doctest::Approx(0.0));
  CHECK(weighted_split_entropy(v, std::vector<int>{0, 1, 0, 1}, 2.5) == doctest::Approx(1.0));
}

TEST_CASE("best split") {
  const std::vector<double> v{4, 1, 3, 2};
  const auto s = best_split("x", v, std::vector<int>{1, 0, 1, 0});
  REQUIRE(s);
  CHECK(s->feature == "x");
  CHECK(s->cut_value == 2.5);
  CHECK_FALSE(best_split("x", std::vector<double>{2, 2, 2}, std::vector<int>{0, 1, 0}));
}

TEST_CASE("best split matches the exhaustive oracle on random inputs") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<double> v(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = static_cast<double>(rng() % 8) * 0.5;
      y[i] = static_cast<int>(rng() % 3);
    }
    const auto got = best_split("f", v, y);
    const auto want = oracle::exhaustive_split(v, y);
    REQUIRE(got.has_value() == want.has_value());
    if (!got) continue;
    CHECK(got->cut_value == want->cut);
    CHECK(weighted_split_entropy(v, y, got->cut_value) == doctest::Approx(want->entropy).epsilon(1e-9));
  }
}

TEST_CASE("discretize skips missing cells and categorical columns") {
  std::istringstream in("a,b,cls\n1,x,p\n2,y,p\n?,x,q\n3,y,q\n4,x,q\n");
  const auto t = load_csv(in);
  const auto cuts = discretize(t);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].feature == "a");
  CHECK(cuts[0].cut_value == 2.5);
}

TEST_CASE("discretize omits constant numeric features") {
  std::istringstream in("a,cls\n1,p\n1,q\n");
  CHECK(discretize(load_csv(in)).empty());
}
