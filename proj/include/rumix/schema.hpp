#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rumix/bitvec.hpp"
#include "rumix/discretizer.hpp"
#include "rumix/table.hpp"

namespace rumix {

// Category added to any feature that has missing cells in the training data.
inline constexpr const char* kMissingLabel = "␀missing";

// Bin label used for a numeric feature that has no usable cut.
inline constexpr const char* kSingleBinLabel = "all";

struct FeatureDescriptor {
  std::string name;
  ColumnKind kind = ColumnKind::categorical;  // numeric = discretized through `cut`
  std::vector<std::string> domain;
  std::size_t bit_offset = 0;
  std::optional<double> cut;

  std::size_t width() const { return domain.size(); }
  std::size_t end_bit() const { return bit_offset + domain.size(); }
  std::optional<std::size_t> index_of(const std::string& label) const;
  std::optional<std::size_t> missing_index() const;
};

class DatasetSchema {
 public:
  DatasetSchema() = default;
  DatasetSchema(std::vector<FeatureDescriptor> features, std::vector<std::string> class_labels);

  const std::vector<FeatureDescriptor>& features() const { return features_; }
  const std::vector<std::string>& class_labels() const { return class_labels_; }
  std::size_t feature_count() const { return features_.size(); }
  std::size_t class_count() const { return class_labels_.size(); }
  std::size_t class_offset() const { return class_offset_; }
  std::size_t feature_width() const { return class_offset_; }
  std::size_t total_width() const { return class_offset_ + class_labels_.size(); }

  std::optional<int> class_index(const std::string& label) const;
  // Feature whose segment contains bit i; nullopt for class bits.
  std::optional<std::size_t> feature_of_bit(std::size_t bit) const;
  // Maps each bit to its feature index, or feature_count() for class bits.
  const std::vector<std::size_t>& bit_owner() const { return bit_owner_; }

  friend bool operator==(const DatasetSchema& a, const DatasetSchema& b) {
    return a.class_labels_ == b.class_labels_ && a.features_.size() == b.features_.size() &&
           std::equal(a.features_.begin(), a.features_.end(), b.features_.begin(),
                      [](const FeatureDescriptor& x, const FeatureDescriptor& y) {
                        return x.name == y.name && x.kind == y.kind && x.domain == y.domain &&
                               x.bit_offset == y.bit_offset && x.cut == y.cut;
                      });
  }

 private:
  std::vector<FeatureDescriptor> features_;
  std::vector<std::string> class_labels_;
  std::size_t class_offset_ = 0;
  std::vector<std::size_t> bit_owner_;
};

struct EncodedInstance {
  BitVec bits;
  int class_index = -1;  // -1: label unknown to the schema
};

struct Dataset {
  DatasetSchema schema;
  std::vector<EncodedInstance> instances;
  int majority_class = 0;

  std::size_t size() const { return instances.size(); }
};

enum class EncodeMode { train, predict };

DatasetSchema build_schema(const RawTable& table, std::span<const SplitCut> cuts);

// Bin label for a raw cell of feature `f`, or nullopt if it maps nowhere.
std::optional<std::size_t> value_index(const FeatureDescriptor& f, const Cell& cell);

// `row` holds the feature cells in schema order. In train mode an unmappable
// value or class label throws InvariantViolation; in predict mode it yields an
// all-zero segment or class_index -1.
EncodedInstance encode_instance(std::span<const Cell> row, const Cell& label, const DatasetSchema& schema,
                                EncodeMode mode);

// Training rows -> Dataset (majority class ties broken by lowest index).
Dataset encode_dataset(const RawTable& table, const DatasetSchema& schema);
std::vector<EncodedInstance> encode_rows(const RawTable& table, const DatasetSchema& schema,
                                         EncodeMode mode = EncodeMode::predict);

// Feature labels of an encoded instance; nullopt for an all-zero segment.
std::vector<std::optional<std::string>> decode_instance(const EncodedInstance& x, const DatasetSchema& schema);

// Throws SchemaMismatch if the table's feature columns do not match the schema.
void check_compatible(const RawTable& table, const DatasetSchema& schema);

// Loader options forcing column kinds to what the schema expects.
LoaderOptions loader_options_for(const DatasetSchema& schema, const std::string& class_column);

std::string format_number(double value);

}  // namespace rumix
