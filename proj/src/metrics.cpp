#include "seqfair/metrics.hpp"

#include <cmath>
#include <string_view>

#include "seqfair/distributions.hpp"
#include "seqfair/errors.hpp"

namespace seqfair {

namespace {

void check_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": lengths differ (" + std::to_string(a) + " vs " +
                     std::to_string(b) + ")");
  }
}

}  // namespace

double unfairness_single(std::span<const double> scores, std::span<const std::string> groups,
                         const GridSpec& grid) {
  check_same_length(scores.size(), groups.size(), "unfairness");
  grid.validate();
  const EmpiricalDistribution pooled(scores);

  std::map<std::string_view, std::vector<double>> buckets;
  for (std::size_t i = 0; i < scores.size(); ++i) buckets[groups[i]].push_back(scores[i]);
  if (buckets.size() == 1) return 0.0;

  std::vector<double> pooled_q(grid.nodes);
  for (std::size_t t = 0; t < grid.nodes; ++t) pooled_q[t] = pooled.quantile(grid.node(t));

  double worst = 0.0;
  for (const auto& [group, members] : buckets) {
    const EmpiricalDistribution dist(members);
    double area = 0.0;
    for (std::size_t t = 0; t < grid.nodes; ++t) {
      area += std::abs(pooled_q[t] - dist.quantile(grid.node(t)));
    }
    worst = std::max(worst, area / static_cast<double>(grid.nodes));
  }
  return worst;
}

UnfairnessBreakdown unfairness_total(std::span<const double> scores, const Dataset& data,
                                     std::span<const std::string> attributes,
                                     const GridSpec& grid) {
  check_same_length(scores.size(), data.size(), "unfairness");
  UnfairnessBreakdown out;
  for (const auto& name : attributes) {
    const double u = unfairness_single(scores, data.attribute(name), grid);
    out.per_attribute.emplace_back(name, u);
    out.total += u;
  }
  return out;
}

double risk_mse(std::span<const double> predictions, std::span<const double> labels) {
  check_same_length(predictions.size(), labels.size(), "risk_mse");
  if (predictions.empty()) throw ShapeError("risk_mse: needs at least one row");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - labels[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predictions.size());
}

ClassificationMetrics classification_metrics(std::span<const double> scores,
                                             std::span<const double> labels, double threshold) {
  check_same_length(scores.size(), labels.size(), "classification_metrics");
  if (scores.empty()) throw ShapeError("classification_metrics: needs at least one row");
  std::size_t tp = 0, fp = 0, fn = 0, correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 0.0 && labels[i] != 1.0) {
      throw InvalidLabel("label at row " + std::to_string(i) + " is " +
                         std::to_string(labels[i]) + ", expected 0 or 1");
    }
    const bool predicted = scores[i] > threshold;
    const bool actual = labels[i] == 1.0;
    if (predicted == actual) ++correct;
    if (predicted && actual) ++tp;
    if (predicted && !actual) ++fp;
    if (!predicted && actual) ++fn;
  }
  ClassificationMetrics m;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(scores.size());
  // F1 = 2 tp / (2 tp + fp + fn); zero when precision + recall is zero.
  const std::size_t denom = 2 * tp + fp + fn;
  m.f1 = tp == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  return m;
}

std::map<std::string, std::optional<double>> relative_improvement(
    const std::map<std::string, double>& baseline, const std::map<std::string, double>& corrected) {
  if (baseline.size() != corrected.size()) {
    throw ShapeError("relative_improvement: baseline and corrected attributes differ");
  }
  std::map<std::string, std::optional<double>> out;
  for (const auto& [name, base] : baseline) {
    const auto it = corrected.find(name);
    if (it == corrected.end()) {
      throw ShapeError("relative_improvement: attribute '" + name + "' missing from corrected");
    }
    out[name] = base > 0.0 ? std::optional<double>(it->second / base) : std::nullopt;
  }
  return out;
}

MetricsReport evaluate(std::span<const double> scores, const Dataset& data,
                       std::span<const std::string> attributes, const EvaluateOptions& options) {
  MetricsReport report;
  const auto u = unfairness_total(scores, data, attributes, options.grid);
  report.unfairness_per_attribute = u.per_attribute;
  report.unfairness_total = u.total;
  if (data.labels) {
    report.risk_mse = risk_mse(scores, *data.labels);
    if (options.task == Task::kClassification) {
      const auto c = classification_metrics(scores, *data.labels, options.threshold);
      report.accuracy = c.accuracy;
      report.f1 = c.f1;
    }
  }
  return report;
}

}  // namespace seqfair
