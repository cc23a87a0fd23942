#include "rumix/config.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <set>

#include "rumix/errors.hpp"

namespace rumix {

namespace {

std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  if (auto d = parse_number(v)) return *d;
  throw InputError("'" + key + "' expects a number, got '" + v + "'");
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  auto d = parse_number(v);
  if (!d || *d < 0 || *d != static_cast<double>(static_cast<std::uint64_t>(*d)))
    throw InputError("'" + key + "' expects a non-negative integer, got '" + v + "'");
  return static_cast<std::uint64_t>(*d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InputError("'" + key + "' expects true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v + ",") {
    if (c == ',') {
      if (auto t = trim_copy(cur); !t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"mode",   "alpha",     "beta",   "gamma",   "k",
                                          "seed",   "rng_seed",  "stratified", "max_composition_passes",
                                          "mutation_strategy", "threads", "out_dir", "format", "class", "audit"};
  return keys;
}

void apply_layer(RunConfig& cfg, const Settings& layer) {
  for (const auto& [key, value] : layer)
    if (!known_keys().count(key)) throw InputError("unknown configuration key '" + key + "'");

  auto get = [&](const char* key) -> std::optional<std::string> {
    if (auto it = layer.find(key); it != layer.end()) return it->second;
    return std::nullopt;
  };

  const auto alpha = get("alpha");
  const auto beta = get("beta");
  if (alpha || beta) {
    const double a = alpha ? to_double("alpha", *alpha) : 1.0 - to_double("beta", *beta);
    const double b = beta ? to_double("beta", *beta) : 1.0 - a;
    cfg.learner.main_profile = WeightProfile::make(a, b);
  }
  if (auto v = get("gamma")) {
    cfg.gamma = to_double("gamma", *v);
    cfg.learner.composition_profile = WeightProfile::from_gamma(*cfg.gamma);
  }
  if (auto v = get("mode")) cfg.learner.mode = parse_mode(*v);
  if (auto v = get("k")) {
    cfg.cv.k = static_cast<std::size_t>(to_uint("k", *v));
    if (cfg.cv.k < 2) throw InputError("'k' must be at least 2");
  }
  if (auto v = get("seed")) {
    cfg.cv.seed = to_uint("seed", *v);
    cfg.learner.rng_seed = cfg.cv.seed;
  }
  if (auto v = get("rng_seed")) cfg.learner.rng_seed = to_uint("rng_seed", *v);
  if (auto v = get("stratified")) cfg.cv.stratified = to_bool("stratified", *v);
  if (auto v = get("max_composition_passes")) {
    cfg.learner.max_composition_passes = static_cast<int>(to_uint("max_composition_passes", *v));
    if (cfg.learner.max_composition_passes < 1) throw InputError("'max_composition_passes' must be >= 1");
  }
  if (auto v = get("mutation_strategy")) cfg.learner.mutation_strategy = parse_mutation_strategy(*v);
  if (auto v = get("threads")) cfg.cv.threads = static_cast<std::size_t>(to_uint("threads", *v));
  if (auto v = get("out_dir")) cfg.out_dir = *v;
  if (auto v = get("format")) {
    cfg.formats = split_list(*v);
    for (const auto& f : cfg.formats)
      if (f != "csv" && f != "md" && f != "json") throw InputError("unknown output format '" + f + "'");
  }
  if (auto v = get("class")) cfg.class_column = *v;
  if (auto v = get("audit")) cfg.learner.audit = to_bool("audit", *v);
}

}  // namespace

const std::string* KeyValueDoc::find(const std::string& key, const std::string& section) const {
  auto it = sections.find(section);
  if (it == sections.end()) return nullptr;
  const std::string* found = nullptr;
  for (const auto& [k, v] : it->second)
    if (k == key) found = &v;
  return found;
}

std::map<std::string, std::string> KeyValueDoc::flat(const std::string& section) const {
  std::map<std::string, std::string> out;
  if (auto it = sections.find(section); it != sections.end())
    for (const auto& [k, v] : it->second) out[k] = v;
  return out;
}

KeyValueDoc parse_key_values(std::istream& in, const std::string& origin) {
  KeyValueDoc doc;
  std::string section;
  doc.sections[section];
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = trim_copy(raw);
    const std::string where = origin + ":" + std::to_string(line);
    if (text.empty() || text[0] == '#') continue;
    if (text[0] == '[') {
      if (text.back() != ']') throw InputError(where + ": malformed section header");
      section = trim_copy(text.substr(1, text.size() - 2));
      doc.sections[section];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw InputError(where + ": expected 'key = value'");
    std::string key = trim_copy(text.substr(0, eq));
    std::string value = trim_copy(text.substr(eq + 1));
    if (key.empty()) throw InputError(where + ": empty key");
    if (!value.empty() && value[0] == '"') {
      const auto close = value.find('"', 1);
      if (close == std::string::npos) throw InputError(where + ": unterminated string");
      const std::string rest = trim_copy(value.substr(close + 1));
      if (!rest.empty() && rest[0] != '#') throw InputError(where + ": trailing text after string");
      value = value.substr(1, close - 1);
    } else if (auto hash = value.find(" #"); hash != std::string::npos) {
      value = trim_copy(value.substr(0, hash));
    }
    doc.sections[section].emplace_back(std::move(key), std::move(value));
  }
  return doc;
}

KeyValueDoc load_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config not found: " + path.string());
  return parse_key_values(in, path.string());
}

RunConfig resolve_run_config(const Settings& file, const Settings& flags) {
  RunConfig cfg;
  apply_layer(cfg, file);
  apply_layer(cfg, flags);
  return cfg;
}

Manifest load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw InputError("manifest not found: " + path.string());
  const KeyValueDoc doc = load_key_values(path);
  const auto base = path.parent_path();
  Manifest m;
  if (const auto* p = doc.find("published")) m.published = base / *p;
  auto it = doc.sections.find("datasets");
  if (it == doc.sections.end() || it->second.empty()) throw InputError("manifest lists no [datasets]");
  for (const auto& [name, rel] : it->second) m.datasets.push_back({name, base / rel, {}});
  return m;
}

}  // namespace rumix
