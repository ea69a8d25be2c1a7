#include "seqfair/dataset.hpp"

#include <algorithm>
#include <charconv>

#include "seqfair/errors.hpp"

namespace seqfair {

std::string format_real(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::optional<std::size_t> Table::find(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

void Table::add_column(std::string name, std::vector<std::string> cells) {
  if (!columns.empty() && cells.size() != rows()) {
    throw ShapeError("column '" + name + "' has " + std::to_string(cells.size()) +
                     " rows, table has " + std::to_string(rows()));
  }
  header.push_back(std::move(name));
  columns.push_back(std::move(cells));
}

std::size_t Dataset::attribute_index(std::string_view name) const {
  const auto it = std::find(attribute_names.begin(), attribute_names.end(), name);
  if (it == attribute_names.end()) {
    throw SchemaError("attribute column '" + std::string(name) + "' is not present");
  }
  return static_cast<std::size_t>(it - attribute_names.begin());
}

void Dataset::validate() const {
  const std::size_t n = scores.size();
  if (attributes.size() != attribute_names.size()) {
    throw ShapeError("attribute names and columns disagree in count");
  }
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].size() != n) {
      throw ShapeError("attribute '" + attribute_names[i] + "' has " +
                       std::to_string(attributes[i].size()) + " rows, expected " +
                       std::to_string(n));
    }
  }
  if (labels && labels->size() != n) {
    throw ShapeError("label column has " + std::to_string(labels->size()) +
                     " rows, expected " + std::to_string(n));
  }
  if (!source.columns.empty() && source.rows() != n) {
    throw ShapeError("source table row count disagrees with scores");
  }
}

Dataset take_rows(const Dataset& data, std::span<const std::size_t> rows) {
  Dataset out;
  out.attribute_names = data.attribute_names;
  out.scores.reserve(rows.size());
  for (std::size_t r : rows) out.scores.push_back(data.scores.at(r));
  out.attributes.resize(data.attributes.size());
  for (std::size_t a = 0; a < data.attributes.size(); ++a) {
    out.attributes[a].reserve(rows.size());
    for (std::size_t r : rows) out.attributes[a].push_back(data.attributes[a].at(r));
  }
  if (data.labels) {
    out.labels.emplace();
    out.labels->reserve(rows.size());
    for (std::size_t r : rows) out.labels->push_back(data.labels->at(r));
  }
  if (!data.source.columns.empty()) {
    out.source.header = data.source.header;
    out.source.columns.resize(data.source.columns.size());
    for (std::size_t c = 0; c < data.source.columns.size(); ++c) {
      for (std::size_t r : rows) out.source.columns[c].push_back(data.source.columns[c].at(r));
    }
  }
  return out;
}

}  // namespace seqfair
