// rumix: fit / predict / eval / bench front end.
//
// Exit codes: 0 ok, 2 input error, 3 schema mismatch, 4 internal invariant
// violation.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rumix/config.hpp"
#include "rumix/errors.hpp"
#include "rumix/eval.hpp"
#include "rumix/learner.hpp"
#include "rumix/model_io.hpp"

namespace fs = std::filesystem;
using namespace rumix;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSchema = 3;
constexpr int kExitInternal = 4;

struct CommonFlags {
  std::string config_path;
  Settings flags;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key = value configuration file");
    for (const char* key : {"mode", "alpha", "beta", "gamma", "k", "seed", "stratified", "out-dir", "format",
                            "class", "threads", "max-composition-passes", "mutation-strategy", "audit"}) {
      std::string name = std::string("--") + key;
      std::string setting = key;
      for (auto& c : setting)
        if (c == '-') c = '_';
      app->add_option_function<std::string>(
          name, [this, setting](const std::string& v) { flags[setting] = v; }, "override '" + setting + "'");
    }
  }

  RunConfig resolve() const {
    Settings file;
    if (!config_path.empty()) file = load_key_values(config_path).flat();
    return resolve_run_config(file, flags);
  }
};

LoaderOptions loader_for(const RunConfig& cfg) {
  LoaderOptions opts;
  if (!cfg.class_column.empty()) opts.class_column = cfg.class_column;
  return opts;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

bool wants(const RunConfig& cfg, const std::string& format) {
  return std::find(cfg.formats.begin(), cfg.formats.end(), format) != cfg.formats.end();
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
  return buf;
}

nlohmann::json report_json(const EvalReport& r) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : r.folds)
    folds.push_back({{"accuracy", f.accuracy},
                     {"train_rows", f.train_rows},
                     {"test_rows", f.test_rows},
                     {"rule_count", f.rule_count},
                     {"warnings", f.warnings}});
  return {{"dataset", r.dataset},
          {"mode", to_string(r.config.mode)},
          {"alpha", r.config.main_profile.alpha},
          {"beta", r.config.main_profile.beta},
          {"gamma", r.config.composition_profile ? nlohmann::json(r.config.composition_profile->beta) : nlohmann::json()},
          {"k", r.cv.k},
          {"seed", r.cv.seed},
          {"stratified", r.cv.stratified},
          {"mean_accuracy", format_percent(r.mean_accuracy())},
          {"mean_rule_count", r.mean_rule_count()},
          {"folds", folds}};
}

int cmd_fit(const std::string& dataset, const std::string& model_out, const CommonFlags& common) {
  const RunConfig cfg = common.resolve();
  const RawTable table = load_dataset_file(dataset, loader_for(cfg));
  const Classifier clf = fit_table(table, cfg.learner);
  save_classifier(clf, model_out);
  std::cout << "rules: " << clf.rules.size() << "\n";
  for (std::size_t i = 0; i < clf.rules.size() && i < 5; ++i) {
    char fit[32];
    std::snprintf(fit, sizeof fit, "%.4f", clf.rules[i].fitness);
    std::cout << "  [" << fit << "] " << render(clf.rules[i], clf.schema) << "\n";
  }
  std::cout << "default: " << clf.schema.class_labels()[static_cast<std::size_t>(clf.default_class)] << "\n"
            << "model written to " << model_out << "\n";
  return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& dataset, const std::string& out_path) {
  const Classifier clf = load_classifier(model_path);
  LoaderOptions opts = loader_options_for(clf.schema, clf.class_column);
  opts.unlabeled = true;
  if (clf.class_column.empty()) opts.class_column.reset();
  const RawTable table = load_dataset_file(dataset, opts);
  const auto rows = encode_rows(table, clf.schema, EncodeMode::predict);

  std::ostringstream csv;
  csv << "row_id,predicted,matched_rule\n";
  std::size_t correct = 0, labelled = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto m = clf.match(rows[i]);
    const int cls = m ? clf.rules[*m].class_index : clf.default_class;
    csv << i << ',' << clf.schema.class_labels()[static_cast<std::size_t>(cls)] << ','
        << (m ? std::to_string(clf.rules[*m].seq) : std::string("default")) << '\n';
    if (table.target.cells[i]) {
      ++labelled;
      if (rows[i].class_index == cls) ++correct;
    }
  }
  if (out_path.empty() || out_path == "-")
    std::cout << csv.str();
  else
    write_file(out_path, csv.str());
  if (labelled > 0)
    std::cerr << "accuracy on labelled rows: " << format_percent(static_cast<double>(correct) / labelled) << "% ("
              << correct << "/" << labelled << ")\n";
  return kExitOk;
}

int cmd_eval(const std::string& dataset, const CommonFlags& common) {
  const RunConfig cfg = common.resolve();
  const RawTable table = load_dataset_file(dataset, loader_for(cfg));
  const EvalReport report = cross_validate(table, cfg.learner, cfg.cv, fs::path(dataset).stem().string());
  std::cout << report.dataset << " mode=" << to_string(cfg.learner.mode) << " k=" << cfg.cv.k
            << " seed=" << cfg.cv.seed << "\n";
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    std::cout << "  fold " << f << ": " << format_percent(report.folds[f].accuracy) << " ("
              << report.folds[f].rule_count << " rules)\n";
    for (const auto& w : report.folds[f].warnings) std::cerr << "warning: " << w << "\n";
  }
  std::cout << "mean accuracy: " << format_percent(report.mean_accuracy()) << "\n";
  if (!cfg.out_dir.empty()) {
    const auto stem = report.dataset + "." + to_string(cfg.learner.mode);
    if (wants(cfg, "json")) write_file(cfg.out_dir / (stem + ".json"), report_json(report).dump(2) + "\n");
    if (wants(cfg, "csv")) {
      std::ostringstream csv;
      csv << "fold,accuracy,rules\n";
      for (std::size_t f = 0; f < report.folds.size(); ++f)
        csv << f << ',' << format_percent(report.folds[f].accuracy) << ',' << report.folds[f].rule_count << '\n';
      csv << "mean," << format_percent(report.mean_accuracy()) << ',' << report.mean_rule_count() << '\n';
      write_file(cfg.out_dir / (stem + ".csv"), csv.str());
    }
  }
  return kExitOk;
}

int cmd_bench(const std::string& manifest_path, const CommonFlags& common, bool racer_only, bool rumc_only) {
  const RunConfig cfg = common.resolve();
  const Manifest manifest = load_manifest(manifest_path);
  std::vector<Mode> modes{Mode::rumc, Mode::racer};
  if (common.flags.count("mode")) modes = {cfg.learner.mode};
  if (racer_only) modes = {Mode::racer};
  if (rumc_only) modes = {Mode::rumc};

  std::optional<PublishedTable> published;
  if (!manifest.published.empty()) published = load_published(manifest.published);

  std::vector<BenchDataset> datasets = manifest.datasets;
  if (!cfg.class_column.empty())
    for (auto& d : datasets) d.loader.class_column = cfg.class_column;

  const auto start = std::chrono::steady_clock::now();
  const BenchTable table = benchmark(datasets, modes, cfg.learner, cfg.cv, published ? &*published : nullptr);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string md = bench_markdown(table);
  std::cout << md;
  const fs::path out_dir = cfg.out_dir.empty() ? fs::path(".") : cfg.out_dir;
  if (wants(cfg, "csv")) write_file(out_dir / "bench.csv", bench_csv(table));
  if (wants(cfg, "md")) write_file(out_dir / "bench.md", md);
  if (wants(cfg, "json")) {
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : table.reports) reports.push_back(report_json(r));
    write_file(out_dir / "bench.json", reports.dump(2) + "\n");
  }
  std::ostringstream log;
  log << "started_or_finished_at " << timestamp() << "\n";
  for (const auto& r : table.reports)
    log << r.dataset << ' ' << to_string(r.config.mode) << " wall_seconds " << r.wall_seconds << "\n";
  log << "total_wall_seconds " << seconds << "\n";
  write_file(out_dir / "bench.log", log.str());
  return table.succeeded() > 0 ? kExitOk : kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rumix: rule-mutation rule-induction classifier"};
  app.require_subcommand(1);

  std::string dataset, model, out, manifest;
  CommonFlags fit_flags, eval_flags, bench_flags;
  bool racer_only = false, rumc_only = false;

  auto* fit = app.add_subcommand("fit", "train on a whole dataset and write a model");
  fit->add_option("dataset", dataset, "ARFF or CSV file")->required();
  fit->add_option("-o,--model", model, "model output path")->default_val("model.json");
  fit_flags.attach(fit);

  auto* predict = app.add_subcommand("predict", "label a dataset with a saved model");
  predict->add_option("model", model, "model JSON")->required();
  predict->add_option("dataset", dataset, "ARFF or CSV file")->required();
  predict->add_option("-o,--out", out, "prediction CSV (default stdout)");

  auto* eval = app.add_subcommand("eval", "k-fold cross-validation of one dataset");
  eval->add_option("dataset", dataset, "ARFF or CSV file")->required();
  eval_flags.attach(eval);

  auto* bench = app.add_subcommand("bench", "cross-validate every dataset of a manifest");
  bench->add_option("manifest", manifest, "manifest file")->required();
  bench->add_flag("--racer-only", racer_only, "compute only the RACER column");
  bench->add_flag("--rumc-only", rumc_only, "compute only the RUMC column");
  bench_flags.attach(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*fit) return cmd_fit(dataset, model, fit_flags);
    if (*predict) return cmd_predict(model, dataset, out);
    if (*eval) return cmd_eval(dataset, eval_flags);
    if (*bench) return cmd_bench(manifest, bench_flags, racer_only, rumc_only);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SchemaMismatch& e) {
    std::cerr << "schema mismatch: " << e.what() << "\n";
    return kExitSchema;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}
