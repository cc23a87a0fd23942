#include "rumix/schema.hpp"

#include <charconv>
#include <unordered_map>
#include <unordered_set>

#include "rumix/errors.hpp"

namespace rumix {

namespace {

std::vector<std::string> first_appearance_domain(const RawColumn& col) {
  std::vector<std::string> domain;
  std::unordered_set<std::string> seen;
  for (const auto& cell : col.cells)
    if (cell && seen.insert(*cell).second) domain.push_back(*cell);
  return domain;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::optional<std::size_t> FeatureDescriptor::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (domain[i] == label) return i;
  return std::nullopt;
}

std::optional<std::size_t> FeatureDescriptor::missing_index() const {
  if (!domain.empty() && domain.back() == kMissingLabel) return domain.size() - 1;
  return std::nullopt;
}

DatasetSchema::DatasetSchema(std::vector<FeatureDescriptor> features, std::vector<std::string> class_labels)
    : features_(std::move(features)), class_labels_(std::move(class_labels)) {
  if (class_labels_.empty()) throw InputError("schema needs at least one class label");
  std::unordered_set<std::string> seen(class_labels_.begin(), class_labels_.end());
  if (seen.size() != class_labels_.size()) throw InputError("duplicate class label in schema");
  std::size_t offset = 0;
  for (std::size_t f = 0; f < features_.size(); ++f) {
    auto& feat = features_[f];
    if (feat.domain.empty()) throw InputError("feature '" + feat.name + "' has an empty domain");
    std::unordered_set<std::string> labels(feat.domain.begin(), feat.domain.end());
    if (labels.size() != feat.domain.size())
      throw InputError("feature '" + feat.name + "' has duplicate domain labels");
    feat.bit_offset = offset;
    offset += feat.width();
    bit_owner_.insert(bit_owner_.end(), feat.width(), f);
  }
  class_offset_ = offset;
  bit_owner_.insert(bit_owner_.end(), class_labels_.size(), features_.size());
}

std::optional<int> DatasetSchema::class_index(const std::string& label) const {
  for (std::size_t i = 0; i < class_labels_.size(); ++i)
    if (class_labels_[i] == label) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<std::size_t> DatasetSchema::feature_of_bit(std::size_t bit) const {
  if (bit >= class_offset_) return std::nullopt;
  return bit_owner_[bit];
}

DatasetSchema build_schema(const RawTable& table, std::span<const SplitCut> cuts) {
  if (table.rows() == 0) throw InputError("cannot build a schema from zero rows");
  std::unordered_map<std::string, double> cut_by_name;
  for (const auto& c : cuts) cut_by_name.emplace(c.feature, c.cut_value);

  std::vector<FeatureDescriptor> features;
  features.reserve(table.features.size());
  for (const auto& col : table.features) {
    FeatureDescriptor f;
    f.name = col.name;
    f.kind = col.kind;
    if (col.kind == ColumnKind::numeric) {
      if (auto it = cut_by_name.find(col.name); it != cut_by_name.end()) {
        f.cut = it->second;
        f.domain = {"<=" + format_number(it->second), ">" + format_number(it->second)};
      } else if (col.missing_count() < col.cells.size()) {
        f.domain = {kSingleBinLabel};
      }
    } else {
      f.domain = first_appearance_domain(col);
    }
    if (col.missing_count() > 0) f.domain.emplace_back(kMissingLabel);
    features.push_back(std::move(f));
  }
  return DatasetSchema(std::move(features), first_appearance_domain(table.target));
}

std::optional<std::size_t> value_index(const FeatureDescriptor& f, const Cell& cell) {
  if (!cell) return f.missing_index();
  if (f.kind == ColumnKind::numeric) {
    const auto v = parse_number(*cell);
    if (!v) return f.missing_index();
    if (!f.cut) return f.index_of(kSingleBinLabel);
    return *v <= *f.cut ? 0 : 1;
  }
  if (auto i = f.index_of(*cell)) return i;
  return f.missing_index();
}

EncodedInstance encode_instance(std::span<const Cell> row, const Cell& label, const DatasetSchema& schema,
                                EncodeMode mode) {
  if (row.size() != schema.feature_count())
    throw SchemaMismatch("row has " + std::to_string(row.size()) + " features, schema expects " +
                         std::to_string(schema.feature_count()));
  EncodedInstance x{BitVec(schema.total_width()), -1};
  for (std::size_t i = 0; i < row.size(); ++i) {
    const auto& f = schema.features()[i];
    auto idx = value_index(f, row[i]);
    if (mode == EncodeMode::train) {
      const bool exact = !row[i] || f.kind == ColumnKind::numeric || f.index_of(*row[i]).has_value();
      if (!idx || !exact)
        throw InvariantViolation("training value '" + row[i].value_or("?") + "' of feature '" + f.name +
                                 "' is not in the schema");
    }
    if (idx) x.bits.set(f.bit_offset + *idx);
  }
  if (label) {
    if (auto c = schema.class_index(*label)) x.class_index = *c;
  }
  if (x.class_index >= 0)
    x.bits.set(schema.class_offset() + static_cast<std::size_t>(x.class_index));
  else if (mode == EncodeMode::train)
    throw InvariantViolation("training class label '" + label.value_or("?") + "' is not in the schema");
  return x;
}

std::vector<EncodedInstance> encode_rows(const RawTable& table, const DatasetSchema& schema, EncodeMode mode) {
  check_compatible(table, schema);
  std::vector<EncodedInstance> out;
  out.reserve(table.rows());
  std::vector<Cell> row(table.features.size());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t f = 0; f < row.size(); ++f) row[f] = table.features[f].cells[r];
    out.push_back(encode_instance(row, table.target.cells[r], schema, mode));
  }
  return out;
}

Dataset encode_dataset(const RawTable& table, const DatasetSchema& schema) {
  Dataset data{schema, encode_rows(table, schema, EncodeMode::train), 0};
  if (data.instances.empty()) throw InputError("training dataset is empty");
  std::vector<std::size_t> counts(schema.class_count(), 0);
  for (const auto& x : data.instances) ++counts[static_cast<std::size_t>(x.class_index)];
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[static_cast<std::size_t>(data.majority_class)]) data.majority_class = static_cast<int>(c);
  return data;
}

std::vector<std::optional<std::string>> decode_instance(const EncodedInstance& x, const DatasetSchema& schema) {
  std::vector<std::optional<std::string>> out;
  for (const auto& f : schema.features()) {
    std::optional<std::string> value;
    for (std::size_t i = 0; i < f.width(); ++i)
      if (x.bits.test(f.bit_offset + i)) value = f.domain[i];
    out.push_back(std::move(value));
  }
  return out;
}

void check_compatible(const RawTable& table, const DatasetSchema& schema) {
  if (table.features.size() != schema.feature_count())
    throw SchemaMismatch("data has " + std::to_string(table.features.size()) + " feature columns, model expects " +
                         std::to_string(schema.feature_count()));
  for (std::size_t i = 0; i < table.features.size(); ++i)
    if (table.features[i].name != schema.features()[i].name)
      throw SchemaMismatch("column " + std::to_string(i) + " is '" + table.features[i].name + "', model expects '" +
                           schema.features()[i].name + "'");
}

LoaderOptions loader_options_for(const DatasetSchema& schema, const std::string& class_column) {
  LoaderOptions opts;
  opts.class_column = class_column;
  for (const auto& f : schema.features())
    (f.kind == ColumnKind::numeric ? opts.force_numeric : opts.force_categorical).push_back(f.name);
  return opts;
}

}  // namespace rumix
