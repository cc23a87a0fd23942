#include "rumix/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "rumix/errors.hpp"
#include "rumix/schema.hpp"

namespace rumix {

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  seeded_shuffle(idx, rng);
  return idx;
}

std::vector<int> class_ids(const RawColumn& target) {
  std::unordered_map<std::string, int> ids;
  std::vector<int> out;
  out.reserve(target.cells.size());
  for (const auto& c : target.cells) out.push_back(ids.try_emplace(*c, static_cast<int>(ids.size())).first->second);
  return out;
}

std::vector<std::string> split_simple_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) {
    while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
    while (!cur.empty() && cur.front() == ' ') cur.erase(cur.begin());
    out.push_back(cur);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string cell(const std::optional<double>& v) { return v ? format_percent(*v / 100.0) : std::string{}; }

}  // namespace

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t f : assignments) ++sizes[f];
  return sizes;
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) rows.push_back(i);
  return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) rows.push_back(i);
  return rows;
}

FoldPlan make_folds(std::size_t n_instances, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InputError("k must be at least 2");
  if (n_instances < k) throw InputError("cannot split " + std::to_string(n_instances) + " instances into " +
                                        std::to_string(k) + " folds");
  FoldPlan plan{k, seed, std::vector<std::size_t>(n_instances, 0)};
  const auto order = shuffled_indices(n_instances, seed);
  const std::size_t base = n_instances / k, extra = n_instances % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) plan.assignments[order[pos++]] = f;
  }
  return plan;
}

FoldPlan make_stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InputError("k must be at least 2");
  if (labels.size() < k) throw InputError("cannot split " + std::to_string(labels.size()) + " instances into " +
                                          std::to_string(k) + " folds");
  auto order = shuffled_indices(labels.size(), seed);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  FoldPlan plan{k, seed, std::vector<std::size_t>(labels.size(), 0)};
  for (std::size_t pos = 0; pos < order.size(); ++pos) plan.assignments[order[pos]] = pos % k;
  return plan;
}

double accuracy(std::span<const int> predictions, std::span<const int> truths) {
  if (predictions.size() != truths.size()) throw std::invalid_argument("accuracy: length mismatch");
  if (predictions.empty()) throw std::invalid_argument("accuracy of an empty prediction set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    if (predictions[i] == truths[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

std::size_t resolve_threads(std::size_t requested) {
  std::size_t cap = 0;
  if (const char* env = std::getenv("RUMIX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) cap = static_cast<std::size_t>(v);
  }
  if (requested > 0) return cap ? std::min(requested, cap) : requested;
  if (cap) return cap;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<double> EvalReport::fold_accuracies() const {
  std::vector<double> out;
  for (const auto& f : folds) out.push_back(f.accuracy);
  return out;
}

double EvalReport::mean_accuracy() const {
  if (folds.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& f : folds) sum += f.accuracy;
  return sum / static_cast<double>(folds.size());
}

double EvalReport::mean_rule_count() const {
  if (folds.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& f : folds) sum += static_cast<double>(f.rule_count);
  return sum / static_cast<double>(folds.size());
}

EvalReport cross_validate(const RawTable& table, const LearnerConfig& config, const CvOptions& cv,
                          const std::string& name) {
  const auto start = std::chrono::steady_clock::now();
  const auto labels = class_ids(table.target);
  const FoldPlan plan =
      cv.stratified ? make_stratified_folds(labels, cv.k, cv.seed) : make_folds(table.rows(), cv.k, cv.seed);

  EvalReport report;
  report.dataset = name.empty() ? table.relation : name;
  report.config = config;
  report.cv = cv;
  report.folds.resize(cv.k);

  parallel_for(cv.k, resolve_threads(cv.threads), [&](std::size_t fold) {
    const auto train_idx = plan.train_rows(fold);
    const auto test_idx = plan.test_rows(fold);
    const RawTable train = table.subset(train_idx);
    const RawTable test = table.subset(test_idx);

    auto cuts = discretize(train);
    const DatasetSchema schema = build_schema(train, cuts);
    const Dataset data = encode_dataset(train, schema);
    const Classifier clf = fit(data, config, std::move(cuts));

    FoldResult& result = report.folds[fold];
    std::vector<int> predictions, truths;
    for (const auto& x : encode_rows(test, schema, EncodeMode::predict)) {
      predictions.push_back(clf.predict(x));
      truths.push_back(x.class_index);
      if (x.class_index < 0 && result.warnings.empty())
        result.warnings.push_back("fold " + std::to_string(fold) + ": test class absent from training partition");
    }
    result.accuracy = accuracy(predictions, truths);
    result.train_rows = train_idx.size();
    result.test_rows = test_idx.size();
    result.rule_count = clf.rules.size();
  });

  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  return buf;
}

PublishedTable load_published(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("published table not found: " + path.string());
  PublishedTable table;
  std::string line;
  do {
    if (!std::getline(in, line)) throw InputError("published table is empty: " + path.string());
  } while (line.empty() || line[0] == '#');
  auto header = split_simple_csv(line);
  if (header.empty() || header[0] != "dataset") throw InputError("published table must start with a 'dataset' column");
  table.columns.assign(header.begin() + 1, header.end());
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_simple_csv(line);
    if (fields.size() != header.size()) throw InputError("ragged row in published table: " + line);
    std::vector<std::optional<double>> values;
    for (std::size_t i = 1; i < fields.size(); ++i) values.push_back(parse_number(fields[i]));
    table.rows[fields[0]] = std::move(values);
  }
  return table;
}

std::vector<std::optional<double>> BenchTable::computed_average() const {
  std::vector<std::optional<double>> out;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : rows)
      if (row.computed[m]) {
        sum += *row.computed[m];
        ++n;
      }
    out.push_back(n ? std::optional<double>(sum / static_cast<double>(n)) : std::nullopt);
  }
  return out;
}

std::size_t BenchTable::succeeded() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const BenchRow& r) { return r.error.empty(); }));
}

BenchTable benchmark(const std::vector<BenchDataset>& datasets, const std::vector<Mode>& modes,
                     const LearnerConfig& config, const CvOptions& cv, const PublishedTable* published) {
  if (datasets.empty()) throw InputError("benchmark needs at least one dataset");
  if (modes.empty()) throw InputError("benchmark needs at least one mode");
  BenchTable table;
  table.modes = modes;
  if (published) table.published_columns = published->columns;
  for (const auto& ds : datasets) {
    BenchRow row;
    row.dataset = ds.name;
    row.computed.assign(modes.size(), std::nullopt);
    try {
      const RawTable raw = load_dataset_file(ds.path, ds.loader);
      for (std::size_t m = 0; m < modes.size(); ++m) {
        LearnerConfig cfg = config;
        cfg.mode = modes[m];
        EvalReport report = cross_validate(raw, cfg, cv, ds.name);
        row.computed[m] = report.mean_accuracy() * 100.0;
        table.reports.push_back(std::move(report));
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      row.computed.assign(modes.size(), std::nullopt);
    }
    if (published) {
      auto it = published->rows.find(ds.name);
      row.published = it != published->rows.end()
                          ? it->second
                          : std::vector<std::optional<double>>(published->columns.size(), std::nullopt);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string bench_csv(const BenchTable& table) {
  std::ostringstream out;
  out << "dataset";
  for (Mode m : table.modes) out << ',' << to_string(m);
  for (const auto& c : table.published_columns) out << ',' << c << " (published)";
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.dataset;
    for (const auto& v : row.computed) out << ',' << (row.error.empty() ? cell(v) : std::string("FAILED"));
    for (const auto& v : row.published) out << ',' << cell(v);
    out << '\n';
  }
  out << "AVERAGE (" << table.succeeded() << " of " << table.rows.size() << " datasets)";
  for (const auto& v : table.computed_average()) out << ',' << cell(v);
  for (std::size_t c = 0; c < table.published_columns.size(); ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : table.rows)
      if (row.published.size() > c && row.published[c]) {
        sum += *row.published[c];
        ++n;
      }
    out << ',' << (n ? cell(sum / static_cast<double>(n)) : std::string{});
  }
  out << '\n';
  return out.str();
}

std::string bench_markdown(const BenchTable& table) {
  std::ostringstream out;
  out << "| # | dataset |";
  for (Mode m : table.modes) out << ' ' << to_string(m) << " |";
  for (const auto& c : table.published_columns) out << ' ' << c << "* |";
  out << "\n|---|---|";
  for (std::size_t i = 0; i < table.modes.size() + table.published_columns.size(); ++i) out << "---:|";
  out << '\n';

  auto emit_computed = [&](const std::vector<std::optional<double>>& values) {
    std::optional<double> best;
    for (const auto& v : values)
      if (v && (!best || *v > *best)) best = v;
    for (const auto& v : values) {
      const std::string s = cell(v);
      const bool bold = v && values.size() > 1 && s == cell(best);
      out << ' ' << (bold ? "**" + s + "**" : s) << " |";
    }
  };

  std::size_t n = 0;
  for (const auto& row : table.rows) {
    out << "| " << ++n << " | " << row.dataset << " |";
    if (!row.error.empty()) {
      for (std::size_t i = 0; i < table.modes.size(); ++i) out << " FAILED |";
    } else {
      emit_computed(row.computed);
    }
    for (const auto& v : row.published) out << ' ' << cell(v) << " |";
    out << '\n';
  }
  out << "|  | AVERAGE (" << table.succeeded() << " of " << table.rows.size() << ") |";
  emit_computed(table.computed_average());
  for (std::size_t c = 0; c < table.published_columns.size(); ++c) {
    double sum = 0.0;
    std::size_t k = 0;
    for (const auto& row : table.rows)
      if (row.published.size() > c && row.published[c]) {
        sum += *row.published[c];
        ++k;
      }
    out << ' ' << (k ? cell(sum / static_cast<double>(k)) : std::string{}) << " |";
  }
  out << '\n';
  for (const auto& row : table.rows)
    if (!row.error.empty()) out << "\nFAILED " << row.dataset << ": " << row.error << '\n';
  if (!table.published_columns.empty())
    out << "\n\\* published reference values, not computed by this run.\n";
  return out.str();
}

}  // namespace rumix
