#include "rumix/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "rumix/errors.hpp"

namespace rumix {

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

bool contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::string at_line(std::size_t line) { return " (line " + std::to_string(line) + ")"; }

// Splits an ARFF value list on commas, honoring single and double quotes.
std::vector<std::string> split_arff_values(std::string_view text, std::size_t line) {
  std::vector<std::string> out;
  std::string cur;
  char quote = 0;
  bool was_quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quote) {
      if (c == '\\' && i + 1 < text.size()) {
        cur.push_back(text[++i]);
      } else if (c == quote) {
        quote = 0;
      } else {
        cur.push_back(c);
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      was_quoted = true;
    } else if (c == ',') {
      out.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quote) throw InputError("unterminated quote" + at_line(line));
  out.push_back(was_quoted ? cur : std::string(trim(cur)));
  return out;
}

// Reads one possibly-quoted token from the front of s and advances s.
std::string take_token(std::string_view& s, std::size_t line) {
  s = trim(s);
  if (s.empty()) throw InputError("unexpected end of declaration" + at_line(line));
  std::string tok;
  if (s.front() == '\'' || s.front() == '"') {
    const char q = s.front();
    std::size_t i = 1;
    for (; i < s.size() && s[i] != q; ++i) {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      tok.push_back(s[i]);
    }
    if (i >= s.size()) throw InputError("unterminated quote" + at_line(line));
    s.remove_prefix(i + 1);
  } else {
    std::size_t i = 0;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '{') ++i;
    tok = std::string(s.substr(0, i));
    s.remove_prefix(i);
  }
  return tok;
}

struct ColumnDecl {
  std::string name;
  ColumnKind kind;
  std::vector<std::string> declared;
};

constexpr std::size_t kNoClass = static_cast<std::size_t>(-1);

std::size_t pick_class_column(const std::vector<ColumnDecl>& decls, const LoaderOptions& options) {
  if (!options.class_column) return decls.size() - 1;
  for (std::size_t i = 0; i < decls.size(); ++i)
    if (decls[i].name == *options.class_column) return i;
  if (options.unlabeled) return kNoClass;
  throw InputError("class column missing: '" + *options.class_column + "'");
}

void apply_overrides(std::vector<ColumnDecl>& decls, const LoaderOptions& options) {
  for (auto& decl : decls) {
    if (contains(options.force_numeric, decl.name)) decl.kind = ColumnKind::numeric;
    if (contains(options.force_categorical, decl.name)) decl.kind = ColumnKind::categorical;
  }
}

RawTable assemble(std::string relation, std::vector<ColumnDecl> decls,
                  std::vector<std::vector<Cell>> rows, const LoaderOptions& options) {
  if (decls.size() < 2 && !options.unlabeled) throw InputError("dataset needs at least one feature and a class column");
  if (rows.empty()) throw InputError("dataset has no data rows");
  const std::size_t class_col = pick_class_column(decls, options);

  RawTable table;
  table.relation = std::move(relation);
  for (std::size_t c = 0; c < decls.size(); ++c) {
    RawColumn col{decls[c].name, decls[c].kind, decls[c].declared, {}};
    if (c == class_col) {
      col.kind = ColumnKind::categorical;
      table.target = std::move(col);
    } else {
      table.features.push_back(std::move(col));
    }
  }
  if (class_col == kNoClass) table.target.name = options.class_column.value_or("");
  for (auto& row : rows) {
    if (class_col == kNoClass) {
      for (std::size_t c = 0; c < row.size(); ++c) table.features[c].cells.push_back(std::move(row[c]));
      table.target.cells.emplace_back(std::nullopt);
      continue;
    }
    if (!row[class_col] && !options.unlabeled) {
      ++table.dropped_rows;
      continue;
    }
    std::size_t f = 0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == class_col)
        table.target.cells.push_back(std::move(row[c]));
      else
        table.features[f++].cells.push_back(std::move(row[c]));
    }
  }
  if (table.rows() == 0) throw InputError("every row is missing its class label: " + table.target.name);
  return table;
}

// RFC-4180 record reader. Returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::vector<bool>& quoted,
                     std::size_t& line) {
  fields.clear();
  quoted.clear();
  std::string cur;
  bool in_quotes = false;
  bool was_quoted = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          cur.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        cur.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : std::string(trim(cur)));
      quoted.push_back(was_quoted);
      cur.clear();
      was_quoted = false;
    } else if (c == '\n') {
      ++line;
      break;
    } else {
      cur.push_back(c);
    }
  }
  if (in_quotes) throw InputError("unterminated quoted CSV field" + at_line(line));
  if (!any) return false;
  fields.push_back(was_quoted ? cur : std::string(trim(cur)));
  quoted.push_back(was_quoted);
  return true;
}

}  // namespace

std::size_t RawColumn::missing_count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::nullopt));
}

std::size_t RawTable::missing_cells() const {
  std::size_t n = 0;
  for (const auto& col : features) n += col.missing_count();
  return n;
}

std::vector<Cell> RawTable::row(std::size_t r) const {
  std::vector<Cell> out;
  out.reserve(features.size());
  for (const auto& col : features) out.push_back(col.cells.at(r));
  return out;
}

RawTable RawTable::subset(std::span<const std::size_t> rows) const {
  RawTable out;
  out.relation = relation;
  out.features.reserve(features.size());
  for (const auto& col : features) {
    RawColumn c{col.name, col.kind, col.declared, {}};
    c.cells.reserve(rows.size());
    for (std::size_t r : rows) c.cells.push_back(col.cells.at(r));
    out.features.push_back(std::move(c));
  }
  out.target = RawColumn{target.name, target.kind, target.declared, {}};
  out.target.cells.reserve(rows.size());
  for (std::size_t r : rows) out.target.cells.push_back(target.cells.at(r));
  return out;
}

std::optional<double> parse_number(const std::string& text) {
  std::string_view s = trim(text);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

RawTable load_arff(std::istream& in, const LoaderOptions& options) {
  std::string relation;
  std::vector<ColumnDecl> decls;
  std::vector<std::vector<Cell>> rows;
  bool in_data = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = trim(raw);
    if (text.empty() || text.front() == '%') continue;
    if (!in_data) {
      if (text.front() != '@') throw InputError("expected an ARFF declaration" + at_line(line));
      std::string_view rest = text.substr(1);
      const std::string keyword = take_token(rest, line);
      if (iequals(keyword, "relation")) {
        relation = take_token(rest, line);
      } else if (iequals(keyword, "attribute")) {
        ColumnDecl decl;
        decl.name = take_token(rest, line);
        rest = trim(rest);
        if (!rest.empty() && rest.front() == '{') {
          const auto close = rest.rfind('}');
          if (close == std::string_view::npos) throw InputError("unterminated nominal list" + at_line(line));
          decl.kind = ColumnKind::categorical;
          decl.declared = split_arff_values(rest.substr(1, close - 1), line);
          if (decl.declared.size() == 1 && decl.declared.front().empty()) decl.declared.clear();
        } else {
          const std::string type = take_token(rest, line);
          if (iequals(type, "numeric") || iequals(type, "real") || iequals(type, "integer"))
            decl.kind = ColumnKind::numeric;
          else
            throw InputError("unsupported ARFF attribute type '" + type + "'" + at_line(line));
        }
        decls.push_back(std::move(decl));
      } else if (iequals(keyword, "data")) {
        if (decls.empty()) throw InputError("@data before any @attribute" + at_line(line));
        apply_overrides(decls, options);
        in_data = true;
      } else {
        throw InputError("unknown ARFF declaration '@" + keyword + "'" + at_line(line));
      }
      continue;
    }
    if (text.front() == '{') throw InputError("sparse ARFF rows are not supported" + at_line(line));
    auto values = split_arff_values(text, line);
    if (values.size() != decls.size())
      throw InputError("ragged row: " + std::to_string(values.size()) + " values, expected " +
                       std::to_string(decls.size()) + at_line(line));
    std::vector<Cell> row;
    row.reserve(values.size());
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (values[c] == "?") {
        row.emplace_back(std::nullopt);
        continue;
      }
      const auto& decl = decls[c];
      if (decl.kind == ColumnKind::numeric && !parse_number(values[c]))
        throw InputError("non-numeric value '" + values[c] + "' in numeric attribute '" + decl.name + "'" +
                         at_line(line));
      if (decl.kind == ColumnKind::categorical && !decl.declared.empty() && !contains(decl.declared, values[c]))
        throw InputError("value '" + values[c] + "' not declared for attribute '" + decl.name + "'" +
                         at_line(line));
      row.emplace_back(std::move(values[c]));
    }
    rows.push_back(std::move(row));
  }
  if (line == 0) throw InputError("empty file");
  if (!in_data) throw InputError("ARFF file has no @data section");
  return assemble(std::move(relation), std::move(decls), std::move(rows), options);
}

RawTable load_csv(std::istream& in, const LoaderOptions& options) {
  std::size_t line = 0;
  std::vector<std::string> header;
  std::vector<bool> quoted;
  if (!read_csv_record(in, header, quoted, line) || (header.size() == 1 && header[0].empty()))
    throw InputError("empty file");

  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> fields;
  while (read_csv_record(in, fields, quoted, line)) {
    if (fields.size() == 1 && fields[0].empty() && !quoted[0]) continue;  // blank line
    if (fields.size() != header.size())
      throw InputError("ragged row: " + std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()) + at_line(line));
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!quoted[c] && (fields[c].empty() || fields[c] == "?"))
        row.emplace_back(std::nullopt);
      else
        row.emplace_back(std::move(fields[c]));
    }
    rows.push_back(std::move(row));
  }

  std::vector<ColumnDecl> decls;
  for (std::size_t c = 0; c < header.size(); ++c) {
    bool numeric = true;
    bool seen = false;
    for (const auto& row : rows) {
      if (!row[c]) continue;
      seen = true;
      if (!parse_number(*row[c])) {
        numeric = false;
        break;
      }
    }
    decls.push_back({header[c], (numeric && seen) ? ColumnKind::numeric : ColumnKind::categorical, {}});
  }
  apply_overrides(decls, options);
  for (std::size_t c = 0; c < decls.size(); ++c) {
    if (decls[c].kind != ColumnKind::numeric) continue;
    for (auto& row : rows)
      if (row[c] && !parse_number(*row[c]))
        throw InputError("non-numeric value '" + *row[c] + "' in numeric column '" + decls[c].name + "'");
  }
  return assemble({}, std::move(decls), std::move(rows), options);
}

RawTable load_dataset(std::istream& in, DataFormat format, const LoaderOptions& options) {
  return format == DataFormat::arff ? load_arff(in, options) : load_csv(in, options);
}

RawTable load_dataset_file(const std::filesystem::path& path, const LoaderOptions& options) {
  if (!std::filesystem::is_regular_file(path)) throw InputError("dataset not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open dataset: " + path.string());
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  RawTable table = load_dataset(in, ext == ".arff" ? DataFormat::arff : DataFormat::csv, options);
  if (table.relation.empty()) table.relation = path.stem().string();
  return table;
}

}  // namespace rumix
