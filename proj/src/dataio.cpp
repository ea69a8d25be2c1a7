#include "seqfair/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "seqfair/errors.hpp"

namespace seqfair {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Rows are reported 1-based, not counting the header.
std::string cell_location(std::size_t row, const std::string& column) {
  return "row " + std::to_string(row + 1) + ", column '" + column + "'";
}

std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return v;
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\n\r") != std::string_view::npos;
}

void write_cell(std::ostream& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read from '" + path.string() + "' failed");
  return std::move(buf).str();
}

Table parse_table(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string cell;
  bool quoted = false;
  bool cell_started = false;
  std::size_t line = 1;

  auto end_cell = [&] {
    record.push_back(std::move(cell));
    cell.clear();
    cell_started = false;
  };
  auto end_record = [&] {
    end_cell();
    // Blank lines carry a single empty cell; skip them.
    if (!(record.size() == 1 && trim(record.front()).empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        cell += c;
      }
      continue;
    }
    if (c == '"' && !cell_started && trim(cell).empty()) {
      cell.clear();
      quoted = true;
      cell_started = true;
    } else if (c == ',') {
      end_cell();
    } else if (c == '\n') {
      end_record();
      ++line;
    } else if (c != '\r') {
      cell += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", "line " + std::to_string(line));
  if (!cell.empty() || !record.empty()) end_record();

  if (records.empty()) throw ParseError("input has no header row", "line 1");
  Table table;
  for (auto& h : records.front()) table.header.emplace_back(trim(h));
  table.columns.assign(table.header.size(), {});
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw ParseError("expected " + std::to_string(table.header.size()) + " fields, found " +
                           std::to_string(records[r].size()),
                       "data row " + std::to_string(r));
    }
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      table.columns[c].push_back(std::move(records[r][c]));
    }
  }
  return table;
}

Table read_table(const std::filesystem::path& path) {
  try {
    return parse_table(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.message(), e.location());
  }
}

Dataset dataset_from_table(Table table, const DatasetSchema& schema) {
  auto column = [&](const std::string& name) -> std::size_t {
    const auto idx = table.find(name);
    if (!idx) throw SchemaError("column '" + name + "' is not present");
    return *idx;
  };
  auto reals = [&](std::size_t c, bool allow_missing_error) {
    std::vector<double> out;
    out.reserve(table.rows());
    for (std::size_t r = 0; r < table.rows(); ++r) {
      const std::string_view cell = table.columns[c][r];
      if (allow_missing_error && trim(cell).empty()) {
        throw MissingValue("empty cell at " + cell_location(r, table.header[c]));
      }
      const auto v = parse_real(cell);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("'" + std::string(cell) + "' is not a finite number",
                         cell_location(r, table.header[c]));
      }
      out.push_back(*v);
    }
    return out;
  };

  Dataset data;
  data.scores = reals(column(schema.score_column), false);
  for (const auto& name : schema.attribute_columns) {
    const std::size_t c = column(name);
    std::vector<std::string> tokens;
    tokens.reserve(table.rows());
    for (std::size_t r = 0; r < table.rows(); ++r) {
      const auto token = trim(table.columns[c][r]);
      if (token.empty()) throw MissingValue("empty attribute cell at " + cell_location(r, name));
      tokens.emplace_back(token);
    }
    data.attribute_names.push_back(name);
    data.attributes.push_back(std::move(tokens));
  }
  if (schema.label_column) data.labels = reals(column(*schema.label_column), true);
  data.source = std::move(table);
  return data;
}

Dataset read_dataset(const std::filesystem::path& path, const DatasetSchema& schema) {
  return dataset_from_table(read_table(path), schema);
}

void write_table(const std::filesystem::path& path, const Table& table) {
  auto out = open_for_write(path);
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out << ',';
    write_cell(out, table.header[c]);
  }
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out << ',';
      write_cell(out, table.columns[c][r]);
    }
    out << '\n';
  }
  finish(out, path);
}

void write_scores(const std::filesystem::path& path, const Dataset& data,
                  std::span<const double> fair_scores) {
  data.validate();
  if (fair_scores.size() != data.size()) {
    throw ShapeError("got " + std::to_string(fair_scores.size()) + " fair scores for " +
                     std::to_string(data.size()) + " rows");
  }
  auto out = open_for_write(path);
  const bool has_source = !data.source.columns.empty();
  // A previous fair_score column is replaced, not duplicated.
  const auto stale = data.source.find("fair_score");
  if (has_source) {
    for (std::size_t c = 0; c < data.source.header.size(); ++c) {
      if (c == stale) continue;
      write_cell(out, data.source.header[c]);
      out << ',';
    }
  } else {
    out << "score,";
    for (const auto& n : data.attribute_names) {
      write_cell(out, n);
      out << ',';
    }
    if (data.labels) out << "label,";
  }
  out << "fair_score\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    if (has_source) {
      for (std::size_t c = 0; c < data.source.columns.size(); ++c) {
        if (c == stale) continue;
        write_cell(out, data.source.columns[c][r]);
        out << ',';
      }
    } else {
      out << format_real(data.scores[r]) << ',';
      for (const auto& col : data.attributes) {
        write_cell(out, col[r]);
        out << ',';
      }
      if (data.labels) out << format_real((*data.labels)[r]) << ',';
    }
    out << format_real(fair_scores[r]) << '\n';
  }
  finish(out, path);
}

void save_pipeline(const std::filesystem::path& path, const FairPipeline& pipeline) {
  pipeline.validate();
  auto out = open_for_write(path);
  out << serialize_pipeline(pipeline);
  finish(out, path);
}

FairPipeline load_pipeline(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return deserialize_pipeline(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.message(), e.location());
  }
}

}  // namespace seqfair
