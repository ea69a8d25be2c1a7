#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqfair/dataset.hpp"
#include "seqfair/projection.hpp"

namespace seqfair {

struct DatasetSchema {
  std::string score_column = "score";
  std::vector<std::string> attribute_columns;
  std::optional<std::string> label_column;
};

// Comma-separated UTF-8 text with a header row. Double-quoted fields may
// contain commas, quotes ("") and newlines.
Table read_table(const std::filesystem::path& path);
Table parse_table(std::string_view text);

// SchemaError for a missing column, ParseError (row/column) for a bad number
// or a non-finite score, MissingValue for an empty attribute or label cell.
Dataset dataset_from_table(Table table, const DatasetSchema& schema);
Dataset read_dataset(const std::filesystem::path& path, const DatasetSchema& schema);

// Streams the table row by row.
void write_table(const std::filesystem::path& path, const Table& table);

// Writes the dataset's source columns (or score / attributes / label when it
// has none) followed by a fair_score column at 17 significant digits.
void write_scores(const std::filesystem::path& path, const Dataset& data,
                  std::span<const double> fair_scores);

void save_pipeline(const std::filesystem::path& path, const FairPipeline& pipeline);
FairPipeline load_pipeline(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace seqfair
