#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "rumix/config.hpp"
#include "rumix/errors.hpp"

using namespace rumix;

namespace {

KeyValueDoc parse(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in);
}

}  // namespace

TEST_CASE("key-value grammar") {
  const auto doc = parse(R"(# run settings
mode = racer
out_dir = "results dir"   # trailing comment
seed=7

[datasets]
mux6 = data/mux6.arff
)");
  CHECK(*doc.find("mode") == "racer");
  CHECK(*doc.find("out_dir") == "results dir");
  CHECK(*doc.find("seed") == "7");
  CHECK(*doc.find("mux6", "datasets") == "data/mux6.arff");
  CHECK(doc.find("mux6") == nullptr);
  CHECK(doc.flat().size() == 3);

  CHECK_THROWS_AS(parse("[broken\n"), InputError);
  CHECK_THROWS_AS(parse("novalue\n"), InputError);
  CHECK_THROWS_AS(parse(" = 3\n"), InputError);
  CHECK_THROWS_AS(parse("a = \"open\n"), InputError);
  CHECK_THROWS_AS(parse("a = \"x\" y\n"), InputError);
}

TEST_CASE("defaults") {
  const auto cfg = resolve_run_config({}, {});
  CHECK(cfg.learner.mode == Mode::rumc);
  CHECK(cfg.learner.main_profile.alpha == 0.99);
  CHECK(cfg.learner.main_profile.beta == 0.01);
  CHECK_FALSE(cfg.learner.composition_profile);
  CHECK_FALSE(cfg.gamma);
  CHECK(cfg.cv.k == 10);
  CHECK(cfg.cv.seed == 1);
  CHECK(cfg.cv.stratified);
  CHECK(cfg.learner.rng_seed == 1);
  CHECK(cfg.formats == std::vector<std::string>{"csv", "md"});
}

// Each key is tried with no setting, file only, flag only, and both; the
// flag must win over the file and the file over the default.
TEST_CASE("precedence matrix: flag over file over default") {
  struct Case {
    std::string key, file_value, flag_value;
    std::function<std::string(const RunConfig&)> read;
    std::string default_value;
  };
  const std::vector<Case> cases{
      {"mode", "racer", "rumc", [](const RunConfig& c) { return to_string(c.learner.mode); }, "rumc"},
      {"k", "5", "3", [](const RunConfig& c) { return std::to_string(c.cv.k); }, "10"},
      {"seed", "5", "9", [](const RunConfig& c) { return std::to_string(c.cv.seed); }, "1"},
      {"stratified", "false", "true", [](const RunConfig& c) { return std::string(c.cv.stratified ? "true" : "false"); }, "true"},
      {"alpha", "0.9", "0.8", [](const RunConfig& c) { return std::to_string(c.learner.main_profile.alpha); }, std::to_string(0.99)},
      {"gamma", "0.5", "0.3",
       [](const RunConfig& c) { return c.gamma ? std::to_string(*c.gamma) : std::string("unset"); }, "unset"},
      {"out_dir", "a", "b", [](const RunConfig& c) { return c.out_dir.string(); }, ""},
      {"format", "json", "csv", [](const RunConfig& c) { return c.formats.front(); }, "csv"},
      {"max_composition_passes", "3", "4",
       [](const RunConfig& c) { return std::to_string(c.learner.max_composition_passes); }, "10"},
      {"threads", "2", "6", [](const RunConfig& c) { return std::to_string(c.cv.threads); }, "0"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.key);
    const Settings file{{c.key, c.file_value}};
    const Settings flag{{c.key, c.flag_value}};
    CHECK(c.read(resolve_run_config({}, {})) == c.default_value);
    const auto from_file = c.read(resolve_run_config(file, {}));
    const auto from_flag = c.read(resolve_run_config({}, flag));
    CHECK(from_file != c.default_value);
    CHECK(from_flag != from_file);
    CHECK(c.read(resolve_run_config(file, flag)) == from_flag);
  }
}

TEST_CASE("alpha and beta complement each other within a layer") {
  auto cfg = resolve_run_config({{"alpha", "0.9"}}, {});
  CHECK(cfg.learner.main_profile.beta == doctest::Approx(0.1));
  cfg = resolve_run_config({}, {{"beta", "0.25"}});
  CHECK(cfg.learner.main_profile.alpha == doctest::Approx(0.75));
  cfg = resolve_run_config({{"alpha", "0.6"}, {"beta", "0.4"}}, {{"beta", "0.2"}});
  CHECK(cfg.learner.main_profile.alpha == doctest::Approx(0.8));
  CHECK_THROWS_AS(resolve_run_config({{"alpha", "0.6"}, {"beta", "0.6"}}, {}), InputError);
}

TEST_CASE("gamma sets the composition profile") {
  const auto cfg = resolve_run_config({}, {{"gamma", "0.6"}});
  REQUIRE(cfg.learner.composition_profile);
  CHECK(cfg.learner.composition_profile->alpha == doctest::Approx(0.4));
  CHECK(cfg.learner.composition_profile->beta == doctest::Approx(0.6));
}

TEST_CASE("seed drives both folds and the learner unless rng_seed is given") {
  auto cfg = resolve_run_config({{"seed", "4"}}, {});
  CHECK(cfg.learner.rng_seed == 4);
  cfg = resolve_run_config({{"seed", "4"}}, {{"rng_seed", "8"}});
  CHECK(cfg.cv.seed == 4);
  CHECK(cfg.learner.rng_seed == 8);
}

TEST_CASE("invalid settings") {
  CHECK_THROWS_AS(resolve_run_config({{"colour", "red"}}, {}), InputError);
  CHECK_THROWS_AS(resolve_run_config({}, {{"k", "1"}}), InputError);
  CHECK_THROWS_AS(resolve_run_config({}, {{"k", "2.5"}}), InputError);
  CHECK_THROWS_AS(resolve_run_config({}, {{"mode", "ripper"}}), InputError);
  CHECK_THROWS_AS(resolve_run_config({}, {{"stratified", "maybe"}}), InputError);
  CHECK_THROWS_AS(resolve_run_config({}, {{"format", "xml"}}), InputError);
  CHECK_THROWS_AS(resolve_run_config({}, {{"alpha", "abc"}}), InputError);
  CHECK_THROWS_AS(resolve_run_config({}, {{"max_composition_passes", "0"}}), InputError);
}

TEST_CASE("manifest paths resolve against the manifest's directory") {
  const auto dir = std::filesystem::temp_directory_path() / "rumix_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bench.toml") << "published = pub.csv\n[datasets]\nmux6 = sets/mux6.arff\nled7 = led7.arff\n";
  const auto m = load_manifest(dir / "bench.toml");
  CHECK(m.published == dir / "pub.csv");
  REQUIRE(m.datasets.size() == 2);
  CHECK(m.datasets[0].name == "mux6");
  CHECK(m.datasets[0].path == dir / "sets/mux6.arff");
  std::ofstream(dir / "empty.toml") << "published = x\n";
  CHECK_THROWS_AS(load_manifest(dir / "empty.toml"), InputError);
  CHECK_THROWS_AS(load_manifest(dir / "absent.toml"), InputError);
}
