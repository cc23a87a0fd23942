#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "rumix/discretizer.hpp"
#include "rumix/errors.hpp"
#include "rumix/eval.hpp"
#include "rumix/learner.hpp"
#include "rumix/model_io.hpp"

namespace py = pybind11;
using namespace rumix;

namespace {

RawTable csv_text(const std::string& text, std::optional<std::string> class_column) {
  std::istringstream in(text);
  LoaderOptions options;
  options.class_column = std::move(class_column);
  return load_csv(in, options);
}

RawTable dataset_file(const std::filesystem::path& path, std::optional<std::string> class_column) {
  LoaderOptions options;
  options.class_column = std::move(class_column);
  return load_dataset_file(path, options);
}

std::vector<std::string> predict_labels(const Classifier& clf, const RawTable& table) {
  std::vector<std::string> out;
  for (int c : predict_table(clf, table)) out.push_back(clf.schema.class_labels().at(static_cast<std::size_t>(c)));
  return out;
}

py::dict cv(const RawTable& table, const LearnerConfig& config, std::size_t k, std::uint64_t seed, bool stratified,
            std::size_t threads) {
  CvOptions options;
  options.k = k;
  options.seed = seed;
  options.stratified = stratified;
  options.threads = threads;
  EvalReport report;
  {
    py::gil_scoped_release release;
    report = cross_validate(table, config, options);
  }
  py::dict out;
  out["mean_accuracy"] = report.mean_accuracy();
  out["fold_accuracies"] = report.fold_accuracies();
  out["mean_rule_count"] = report.mean_rule_count();
  return out;
}

}  // namespace

PYBIND11_MODULE(rumix, m) {
  m.doc() = "Rule-induction classifier (rumc and racer modes)";
  m.attr("__version__") = kLibraryVersion;

  auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<SchemaMismatch>(m, "SchemaMismatch", input_error.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  py::class_<RawTable>(m, "Table")
      .def_property_readonly("relation", [](const RawTable& t) { return t.relation; })
      .def_property_readonly("rows", &RawTable::rows)
      .def_property_readonly("features", [](const RawTable& t) {
        std::vector<std::string> names;
        for (const auto& c : t.features) names.push_back(c.name);
        return names;
      })
      .def_property_readonly("class_column", [](const RawTable& t) { return t.target.name; })
      .def("__len__", &RawTable::rows);

  m.def("load_dataset", &dataset_file, py::arg("path"), py::arg("class_column") = py::none(),
        "Load an ARFF or CSV file (format from the extension).");
  m.def("load_csv", &csv_text, py::arg("text"), py::arg("class_column") = py::none(), "Parse CSV text.");

  py::class_<LearnerConfig>(m, "Config")
      .def(py::init<>())
      .def_property(
          "mode", [](const LearnerConfig& c) { return to_string(c.mode); },
          [](LearnerConfig& c, const std::string& s) { c.mode = parse_mode(s); })
      .def_property(
          "alpha", [](const LearnerConfig& c) { return c.main_profile.alpha; },
          [](LearnerConfig& c, double a) { c.main_profile = WeightProfile::make(a, 1.0 - a); })
      .def_property(
          "beta", [](const LearnerConfig& c) { return c.main_profile.beta; },
          [](LearnerConfig& c, double b) { c.main_profile = WeightProfile::make(1.0 - b, b); })
      .def_property(
          "gamma",
          [](const LearnerConfig& c) -> std::optional<double> {
            if (!c.composition_profile) return std::nullopt;
            return c.composition_profile->beta;
          },
          [](LearnerConfig& c, std::optional<double> g) {
            if (g)
              c.composition_profile = WeightProfile::from_gamma(*g);
            else
              c.composition_profile.reset();
          })
      .def_readwrite("seed", &LearnerConfig::rng_seed)
      .def_readwrite("max_composition_passes", &LearnerConfig::max_composition_passes)
      .def_property(
          "mutation_strategy", [](const LearnerConfig& c) { return to_string(c.mutation_strategy); },
          [](LearnerConfig& c, const std::string& s) { c.mutation_strategy = parse_mutation_strategy(s); })
      .def_readwrite("audit", &LearnerConfig::audit);

  py::class_<Classifier>(m, "Classifier")
      .def_static(
          "fit",
          [](const RawTable& table, const LearnerConfig& config) {
            py::gil_scoped_release release;
            return fit_table(table, config);
          },
          py::arg("table"), py::arg("config") = LearnerConfig{})
      .def("predict", &predict_labels, py::arg("table"))
      .def_property_readonly("rules", [](const Classifier& c) {
        std::vector<std::string> out;
        for (const auto& r : c.rules) out.push_back(render(r, c.schema));
        return out;
      })
      .def_property_readonly("fitness", [](const Classifier& c) {
        std::vector<double> out;
        for (const auto& r : c.rules) out.push_back(r.fitness);
        return out;
      })
      .def_property_readonly("default_class",
                             [](const Classifier& c) { return c.schema.class_labels().at(c.default_class); })
      .def_property_readonly("classes", [](const Classifier& c) { return c.schema.class_labels(); })
      .def("to_json", &classifier_to_json)
      .def_static("from_json", &classifier_from_json, py::arg("text"))
      .def("save", [](const Classifier& c, const std::filesystem::path& p) { save_classifier(c, p); })
      .def_static("load", [](const std::filesystem::path& p) { return load_classifier(p); })
      .def("__len__", [](const Classifier& c) { return c.rules.size(); });

  m.def("cross_validate", &cv, py::arg("table"), py::arg("config") = LearnerConfig{}, py::arg("k") = 10,
        py::arg("seed") = 1, py::arg("stratified") = true, py::arg("threads") = 0,
        "k-fold cross-validation; returns mean_accuracy, fold_accuracies and mean_rule_count.");
  m.def(
      "best_split",
      [](const std::vector<double>& values, const std::vector<int>& labels) -> std::optional<double> {
        if (auto s = best_split("x", values, labels)) return s->cut_value;
        return std::nullopt;
      },
      py::arg("values"), py::arg("labels"), "Entropy-minimizing midpoint cut, or None.");
  m.def("format_percent", &format_percent, py::arg("fraction"));
}
