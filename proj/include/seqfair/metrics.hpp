#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqfair/dataset.hpp"
#include "seqfair/grid.hpp"

namespace seqfair {

// Demographic-parity unfairness of `scores` with respect to one attribute:
//   max_g  (1/T) sum_t |Q_pooled(u_t) - Q_g(u_t)|
// on the midpoint grid, with Q_pooled the quantile of all scores.
double unfairness_single(std::span<const double> scores, std::span<const std::string> groups,
                         const GridSpec& grid = {});

struct UnfairnessBreakdown {
  // In the order the attributes were requested; duplicates are kept.
  std::vector<std::pair<std::string, double>> per_attribute;
  double total = 0.0;
};

// Sum of unfairness_single over the listed attribute columns of `data`,
// evaluated on `scores` (one per row of data).
UnfairnessBreakdown unfairness_total(std::span<const double> scores, const Dataset& data,
                                     std::span<const std::string> attributes,
                                     const GridSpec& grid = {});

double risk_mse(std::span<const double> predictions, std::span<const double> labels);

struct ClassificationMetrics {
  double accuracy = 0.0;
  double f1 = 0.0;
};

// Hard label is 1{score > threshold}. Labels must be exactly 0 or 1.
ClassificationMetrics classification_metrics(std::span<const double> scores,
                                             std::span<const double> labels,
                                             double threshold = 0.5);

// corrected / baseline per attribute; nullopt where the baseline is zero.
std::map<std::string, std::optional<double>> relative_improvement(
    const std::map<std::string, double>& baseline, const std::map<std::string, double>& corrected);

struct MetricsReport {
  std::optional<double> risk_mse;
  std::optional<double> accuracy;
  std::optional<double> f1;
  std::vector<std::pair<std::string, double>> unfairness_per_attribute;
  double unfairness_total = 0.0;
  std::map<std::string, std::optional<double>> relative_improvement;
  std::optional<double> fit_seconds;
  std::optional<double> transform_seconds;
};

enum class Task { kRegression, kClassification };

struct EvaluateOptions {
  Task task = Task::kRegression;
  GridSpec grid;
  double threshold = 0.5;
};

// Unfairness always; risk / accuracy / F1 only when data carries labels.
MetricsReport evaluate(std::span<const double> scores, const Dataset& data,
                       std::span<const std::string> attributes, const EvaluateOptions& options = {});

}  // namespace seqfair
