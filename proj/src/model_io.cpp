#include "rumix/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rumix/errors.hpp"

namespace rumix {

using nlohmann::json;

namespace {

json profile_json(const WeightProfile& p) { return {{"alpha", p.alpha}, {"beta", p.beta}}; }

WeightProfile profile_from(const json& j) {
  return WeightProfile::make(j.at("alpha").get<double>(), j.at("beta").get<double>());
}

}  // namespace

std::string classifier_to_json(const Classifier& clf) {
  json features = json::array();
  for (const auto& f : clf.schema.features()) {
    json jf = {{"name", f.name},
               {"kind", f.kind == ColumnKind::numeric ? "numeric" : "categorical"},
               {"domain", f.domain},
               {"bit_offset", f.bit_offset},
               {"width", f.width()}};
    if (f.cut) jf["cut"] = *f.cut;
    features.push_back(std::move(jf));
  }
  json cuts = json::array();
  for (const auto& c : clf.cuts) cuts.push_back({{"feature", c.feature}, {"cut_value", c.cut_value}});
  json rules = json::array();
  const auto& labels = clf.schema.class_labels();
  for (const auto& r : clf.rules)
    rules.push_back({{"class", labels.at(static_cast<std::size_t>(r.class_index))},
                     {"bits", r.bits.to_hex()},
                     {"fitness", r.fitness},
                     {"seq", r.seq},
                     {"n_covers", r.n_covers},
                     {"n_correct", r.n_correct}});
  json doc = {
      {"format", "rumix-classifier"},
      {"version", kModelFormatVersion},
      {"library_version", kLibraryVersion},
      {"schema",
       {{"features", features}, {"class_labels", labels}, {"class_column", clf.class_column},
        {"total_width", clf.schema.total_width()}}},
      {"cuts", cuts},
      {"rules", rules},
      {"default_class", labels.at(static_cast<std::size_t>(clf.default_class))},
      {"config",
       {{"mode", to_string(clf.config.mode)},
        {"main_profile", profile_json(clf.config.main_profile)},
        {"composition_profile",
         clf.config.composition_profile ? profile_json(*clf.config.composition_profile) : json()},
        {"rng_seed", clf.config.rng_seed},
        {"max_composition_passes", clf.config.max_composition_passes},
        {"mutation_strategy", to_string(clf.config.mutation_strategy)}}},
  };
  return doc.dump(2) + "\n";
}

Classifier classifier_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != "rumix-classifier") throw InputError("not a rumix classifier document");
    if (doc.at("version").get<int>() != kModelFormatVersion)
      throw InputError("unsupported classifier format version " + doc.at("version").dump());

    const json& js = doc.at("schema");
    std::vector<FeatureDescriptor> features;
    for (const auto& jf : js.at("features")) {
      FeatureDescriptor f;
      f.name = jf.at("name").get<std::string>();
      f.kind = jf.at("kind").get<std::string>() == "numeric" ? ColumnKind::numeric : ColumnKind::categorical;
      f.domain = jf.at("domain").get<std::vector<std::string>>();
      if (jf.contains("cut")) f.cut = jf.at("cut").get<double>();
      features.push_back(std::move(f));
    }
    Classifier clf;
    clf.schema = DatasetSchema(std::move(features), js.at("class_labels").get<std::vector<std::string>>());
    clf.class_column = js.value("class_column", std::string{});
    if (js.contains("total_width") && js.at("total_width").get<std::size_t>() != clf.schema.total_width())
      throw InputError("schema total_width does not match its features");

    for (const auto& jc : doc.at("cuts"))
      clf.cuts.push_back({jc.at("feature").get<std::string>(), jc.at("cut_value").get<double>()});

    for (const auto& jr : doc.at("rules")) {
      Rule r;
      const auto label = jr.at("class").get<std::string>();
      const auto cls = clf.schema.class_index(label);
      if (!cls) throw InputError("rule refers to unknown class '" + label + "'");
      r.class_index = *cls;
      r.bits = BitVec::from_hex(jr.at("bits").get<std::string>(), clf.schema.total_width());
      r.fitness = jr.at("fitness").get<double>();
      r.seq = jr.at("seq").get<std::uint64_t>();
      r.n_covers = jr.value("n_covers", std::size_t{0});
      r.n_correct = jr.value("n_correct", std::size_t{0});
      r.evaluated = true;
      check_rule(r, clf.schema);
      clf.rules.push_back(std::move(r));
    }
    const auto def = clf.schema.class_index(doc.at("default_class").get<std::string>());
    if (!def) throw InputError("default class is not in the schema");
    clf.default_class = *def;

    const json& jc = doc.at("config");
    clf.config.mode = parse_mode(jc.at("mode").get<std::string>());
    clf.config.main_profile = profile_from(jc.at("main_profile"));
    if (const json& jp = jc.at("composition_profile"); !jp.is_null()) clf.config.composition_profile = profile_from(jp);
    clf.config.rng_seed = jc.at("rng_seed").get<std::uint64_t>();
    clf.config.max_composition_passes = jc.at("max_composition_passes").get<int>();
    clf.config.mutation_strategy = parse_mutation_strategy(jc.value("mutation_strategy", std::string{"sequential"}));
    return clf;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed classifier document: ") + e.what());
  } catch (const InvariantViolation& e) {
    throw InputError(std::string("malformed classifier document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("malformed classifier document: ") + e.what());
  }
}

void save_classifier(const Classifier& clf, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write model file: " + path.string());
  out << classifier_to_json(clf);
  if (!out) throw InputError("failed writing model file: " + path.string());
}

Classifier load_classifier(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("model not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return classifier_from_json(buf.str());
}

}  // namespace rumix
