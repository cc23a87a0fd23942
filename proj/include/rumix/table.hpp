#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rumix {

enum class ColumnKind { categorical, numeric };

using Cell = std::optional<std::string>;  // nullopt = missing

struct RawColumn {
  std::string name;
  ColumnKind kind = ColumnKind::categorical;
  // Nominal values in ARFF declaration order; empty for CSV and numeric columns.
  std::vector<std::string> declared;
  std::vector<Cell> cells;

  std::size_t missing_count() const;
};

// Loaded dataset before any encoding. Feature columns and the class column
// always have the same length.
struct RawTable {
  std::string relation;
  std::vector<RawColumn> features;
  RawColumn target;
  std::size_t dropped_rows = 0;  // rows rejected for a missing class label

  std::size_t rows() const { return target.cells.size(); }
  std::size_t missing_cells() const;
  std::vector<Cell> row(std::size_t r) const;
  RawTable subset(std::span<const std::size_t> rows) const;
};

enum class DataFormat { arff, csv };

struct LoaderOptions {
  // Class column by name. ARFF default: last attribute; CSV default: last column.
  std::optional<std::string> class_column;
  std::vector<std::string> force_numeric;
  std::vector<std::string> force_categorical;
  // Accept data without a class column and keep rows whose label is
  // missing (prediction input).
  bool unlabeled = false;
};

RawTable load_arff(std::istream& in, const LoaderOptions& options = {});
RawTable load_csv(std::istream& in, const LoaderOptions& options = {});
RawTable load_dataset(std::istream& in, DataFormat format, const LoaderOptions& options = {});

// Picks the format from the extension (.arff, otherwise CSV). Throws
// InputError("dataset not found: ...") when the file does not exist.
RawTable load_dataset_file(const std::filesystem::path& path, const LoaderOptions& options = {});

// Strict finite-number parse of a whole cell.
std::optional<double> parse_number(const std::string& text);

}  // namespace rumix
