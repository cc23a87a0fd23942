#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rumix/eval.hpp"
#include "rumix/learner.hpp"

namespace rumix {

// Minimal TOML-style document:
//   # comment
//   key = value          (value bare or "double quoted")
//   [section]
// Keys before the first section header belong to section "".
struct KeyValueDoc {
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;

  const std::string* find(const std::string& key, const std::string& section = "") const;
  std::map<std::string, std::string> flat(const std::string& section = "") const;
};

KeyValueDoc parse_key_values(std::istream& in, const std::string& origin = "<input>");
KeyValueDoc load_key_values(const std::filesystem::path& path);

struct RunConfig {
  LearnerConfig learner;
  CvOptions cv;
  std::optional<double> gamma;  // unset: composition uses the main profile
  std::filesystem::path out_dir;
  std::vector<std::string> formats{"csv", "md"};
  std::string class_column;  // empty: last column
};

// Recognized keys: mode, alpha, beta, gamma, k, seed, rng_seed, stratified,
// max_composition_passes, mutation_strategy, threads, out_dir, format, class,
// audit.
using Settings = std::map<std::string, std::string>;

// Layers defaults <- file <- flags. Within a layer, giving only one of alpha
// and beta derives the other as its complement. Throws InputError on unknown
// keys or invalid values.
RunConfig resolve_run_config(const Settings& file, const Settings& flags);

struct Manifest {
  std::filesystem::path published;  // empty: none
  std::vector<BenchDataset> datasets;
};

// [datasets] entries `name = path` (relative to the manifest's directory);
// optional top-level `published = path`.
Manifest load_manifest(const std::filesystem::path& path);

}  // namespace rumix
