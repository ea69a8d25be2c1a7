#pragma once

#include <cmath>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqfair/dataset.hpp"

namespace seqfair::testing {

using Column = std::pair<std::string, std::vector<std::string>>;

inline Dataset make_dataset(std::vector<double> scores, std::vector<Column> columns,
                            std::optional<std::vector<double>> labels = std::nullopt) {
  Dataset d;
  d.scores = std::move(scores);
  for (auto& [name, cells] : columns) {
    d.attribute_names.push_back(name);
    d.attributes.push_back(std::move(cells));
  }
  d.labels = std::move(labels);
  return d;
}

inline double mean_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return s / static_cast<double>(a.size());
}

inline double stddev(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace seqfair::testing
