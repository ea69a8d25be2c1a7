#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seqfair {

// Raw delimited table: header plus string cells, column-major. Keeps the
// exact text of every input cell so egress can reproduce it.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> columns;

  std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
  // Index of a header name, or nullopt.
  std::optional<std::size_t> find(std::string_view name) const;
  void add_column(std::string name, std::vector<std::string> cells);
};

// Scores, categorical sensitive attributes and optional labels for n rows.
// Attribute values are opaque tokens compared by exact string equality.
struct Dataset {
  std::vector<double> scores;
  std::vector<std::string> attribute_names;
  std::vector<std::vector<std::string>> attributes;  // one column per name
  std::optional<std::vector<double>> labels;
  // The table this dataset was read from; empty for in-memory datasets.
  Table source;

  std::size_t size() const noexcept { return scores.size(); }

  // Throws SchemaError naming the attribute when it is absent.
  std::size_t attribute_index(std::string_view name) const;
  std::span<const std::string> attribute(std::string_view name) const {
    return attributes[attribute_index(name)];
  }

  // Throws ShapeError unless every column has size() rows.
  void validate() const;
};

// 17 significant digits; parses back to the same binary64.
std::string format_real(double value);

// Dataset restricted to the given rows, in the given order.
Dataset take_rows(const Dataset& data, std::span<const std::size_t> rows);

}  // namespace seqfair
