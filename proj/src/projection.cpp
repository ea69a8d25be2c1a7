#include "seqfair/projection.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "seqfair/errors.hpp"

namespace seqfair {

namespace {

constexpr char kJointSeparator = '\x1f';

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw InvalidEpsilon("epsilon " + std::to_string(epsilon) + " is outside [0, 1]");
  }
}

void check_distinct(std::span<const std::string> names, std::string_view what) {
  std::set<std::string_view> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) {
      throw InvalidConfig(std::string(what) + ": attribute '" + n + "' listed more than once");
    }
  }
}

std::string display_group(std::string_view key) {
  std::string out(key);
  std::replace(out.begin(), out.end(), kJointSeparator, ',');
  return out;
}

// Group key of every row for the given attribute columns.
std::vector<std::string> row_keys(const Dataset& data, std::span<const std::size_t> columns) {
  std::vector<std::string> keys(data.size());
  if (columns.size() == 1) {
    const auto& col = data.attributes[columns[0]];
    std::copy(col.begin(), col.end(), keys.begin());
    return keys;
  }
  std::vector<std::string_view> tokens(columns.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) tokens[c] = data.attributes[columns[c]][i];
    keys[i] = joint_group_key(tokens);
  }
  return keys;
}

std::vector<std::size_t> resolve_columns(const Dataset& data, std::span<const std::string> names) {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(data.attribute_index(n));
  return out;
}

void check_levels(const Dataset& data, const std::string& attribute, const FitOptions& options) {
  const auto column = data.attribute(attribute);
  const std::set<std::string_view> observed(column.begin(), column.end());
  if (const auto it = options.levels.find(attribute); it != options.levels.end()) {
    for (const auto& level : it->second) {
      if (!observed.contains(level)) {
        throw DegenerateGroup("attribute '" + attribute + "' level '" + level +
                              "' has no rows in the calibration data");
      }
    }
  }
  if (observed.size() < 2) {
    throw DegenerateGroup("attribute '" + attribute + "' has a single observed level '" +
                          std::string(*observed.begin()) + "'");
  }
}

std::vector<double> ingest(const Dataset& data, const FitOptions& options, JitterSpec& spec) {
  const double amplitude = options.jitter_amplitude.value_or(auto_jitter_amplitude(data.scores));
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw InvalidConfig("jitter amplitude must be a finite non-negative number");
  }
  spec = JitterSpec{amplitude, options.seed};
  return jitter_scores(data.scores, spec);
}

// Applies one step to every row of `scores` in place.
void apply_step_inplace(const TransportStep& step, const Dataset& data,
                        std::vector<double>& scores) {
  const auto columns = resolve_columns(data, step.attributes);
  const auto keys = row_keys(data, columns);
  std::unordered_map<std::string_view, std::size_t> lookup;
  for (std::size_t g = 0; g < step.groups.size(); ++g) lookup.emplace(step.groups[g], g);

  std::vector<std::size_t> index(keys.size());
  std::set<std::string> unseen;
  std::optional<std::size_t> first_bad;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto it = lookup.find(keys[i]);
    if (it == lookup.end()) {
      if (!first_bad) first_bad = i;
      unseen.insert(display_group(keys[i]));
      continue;
    }
    index[i] = it->second;
  }
  if (first_bad) {
    std::string attr;
    for (const auto& a : step.attributes) attr += (attr.empty() ? "" : ",") + a;
    std::string values;
    for (const auto& v : unseen) values += (values.empty() ? "'" : ", '") + v + "'";
    throw UnknownGroup("row " + std::to_string(*first_bad) + ": attribute '" + attr +
                       "' has value(s) not seen at fit time: " + values);
  }
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = step.apply(scores[i], index[i]);
}

}  // namespace

std::string joint_group_key(std::span<const std::string_view> tokens) {
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) key += kJointSeparator;
    key += tokens[i];
  }
  return key;
}

std::optional<std::size_t> TransportStep::group_index(std::string_view group) const {
  const auto it = std::lower_bound(groups.begin(), groups.end(), group);
  if (it == groups.end() || *it != group) return std::nullopt;
  return static_cast<std::size_t>(it - groups.begin());
}

double TransportStep::barycenter_quantile(double level) const {
  double q = 0.0;
  for (std::size_t h = 0; h < dists.size(); ++h) q += weights[h] * dists[h].quantile(level);
  return q;
}

double TransportStep::apply(double score, std::size_t group) const {
  if (epsilon == 1.0) return score;
  const double fair = barycenter_quantile(dists[group].cdf(score));
  if (epsilon == 0.0) return fair;
  return (1.0 - epsilon) * fair + epsilon * score;
}

double TransportStep::apply(double score, std::string_view group) const {
  const auto g = group_index(group);
  if (!g) {
    throw UnknownGroup("group '" + display_group(group) + "' was not seen at fit time");
  }
  return apply(score, *g);
}

void TransportStep::validate() const {
  check_epsilon(epsilon);
  if (attributes.empty()) throw InvalidConfig("transport step names no attribute");
  if (groups.empty()) throw InvalidConfig("transport step has no groups");
  if (weights.size() != groups.size() || dists.size() != groups.size()) {
    throw ShapeError("transport step groups, weights and distributions disagree in count");
  }
  if (!std::is_sorted(groups.begin(), groups.end()) ||
      std::adjacent_find(groups.begin(), groups.end()) != groups.end()) {
    throw InvalidConfig("transport step group values must be unique and sorted");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0 && w <= 1.0)) throw InvalidConfig("group weight outside (0, 1]");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidConfig("group weights sum to " + std::to_string(total) + ", expected 1");
  }
}

void FairPipeline::validate() const {
  std::vector<std::string> expected;
  for (const auto& step : steps) {
    step.validate();
    expected.insert(expected.end(), step.attributes.begin(), step.attributes.end());
  }
  if (expected != order) throw InvalidConfig("pipeline order does not match its steps");
  check_distinct(order, "pipeline");
  if (!(jitter.amplitude >= 0.0) || !std::isfinite(jitter.amplitude)) {
    throw InvalidConfig("jitter amplitude must be a finite non-negative number");
  }
}

TransportStep fit_single_step(std::span<const double> scores, std::span<const std::string> groups,
                              double epsilon, std::size_t max_knots) {
  if (scores.size() != groups.size()) {
    throw ShapeError("scores (" + std::to_string(scores.size()) + ") and groups (" +
                     std::to_string(groups.size()) + ") differ in length");
  }
  if (scores.size() < 2) throw ShapeError("fitting a transport step needs at least 2 rows");
  check_epsilon(epsilon);

  std::map<std::string_view, std::vector<double>> buckets;
  for (std::size_t i = 0; i < scores.size(); ++i) buckets[groups[i]].push_back(scores[i]);

  TransportStep step;
  step.epsilon = epsilon;
  const double n = static_cast<double>(scores.size());
  for (auto& [value, members] : buckets) {
    step.groups.emplace_back(value);
    step.weights.push_back(static_cast<double>(members.size()) / n);
    step.dists.push_back(EmpiricalDistribution(members).compressed(max_knots));
  }
  return step;
}

double apply_single_step(const TransportStep& step, double score, std::string_view group) {
  return step.apply(score, group);
}

FairPipeline fit_sequential(const Dataset& data, std::span<const std::string> order,
                            std::span<const double> epsilons, const FitOptions& options) {
  data.validate();
  if (order.empty()) throw InvalidConfig("sequential fit needs at least one attribute");
  if (epsilons.size() != order.size()) {
    throw InvalidConfig("got " + std::to_string(epsilons.size()) + " epsilon value(s) for " +
                        std::to_string(order.size()) + " attribute(s)");
  }
  check_distinct(order, "order");
  for (double e : epsilons) check_epsilon(e);
  if (data.size() < 2) throw ShapeError("calibration data needs at least 2 rows");
  for (const auto& a : order) check_levels(data, a, options);

  FairPipeline pipeline;
  pipeline.fitted_on = options.fitted_on;
  std::vector<double> working = ingest(data, options, pipeline.jitter);
  for (std::size_t k = 0; k < order.size(); ++k) {
    TransportStep step = fit_single_step(working, data.attribute(order[k]), epsilons[k],
                                         options.max_knots);
    step.attributes = {order[k]};
    apply_step_inplace(step, data, working);
    pipeline.steps.push_back(std::move(step));
    pipeline.order.push_back(order[k]);
  }
  return pipeline;
}

std::vector<double> apply_sequential(const FairPipeline& pipeline, const Dataset& data) {
  data.validate();
  std::vector<double> scores = data.scores;
  for (const auto& step : pipeline.steps) apply_step_inplace(step, data, scores);
  return scores;
}

TransportStep fit_global_joint(const Dataset& data, std::span<const std::string> attributes,
                               const FitOptions& options, double epsilon) {
  data.validate();
  if (attributes.empty()) throw InvalidConfig("joint fit needs at least one attribute");
  check_distinct(attributes, "joint fit");
  for (const auto& a : attributes) {
    const auto column = data.attribute(a);
    const std::set<std::string_view> observed(column.begin(), column.end());
    if (const auto it = options.levels.find(a); it != options.levels.end()) {
      for (const auto& level : it->second) {
        if (!observed.contains(level)) {
          throw DegenerateGroup("attribute '" + a + "' level '" + level +
                                "' has no rows in the calibration data");
        }
      }
    }
  }
  const auto keys = row_keys(data, resolve_columns(data, attributes));
  std::map<std::string_view, std::size_t> counts;
  for (const auto& k : keys) ++counts[k];
  for (const auto& [cell, count] : counts) {
    if (count < options.min_group_size) {
      std::string attr;
      for (const auto& a : attributes) attr += (attr.empty() ? "" : ",") + a;
      throw DegenerateGroup("joint cell (" + display_group(cell) + ") of attributes (" + attr +
                            ") has " + std::to_string(count) + " row(s), minimum is " +
                            std::to_string(options.min_group_size));
    }
  }
  TransportStep step = fit_single_step(data.scores, keys, epsilon, options.max_knots);
  step.attributes.assign(attributes.begin(), attributes.end());
  return step;
}

FairPipeline fit_global_pipeline(const Dataset& data, std::span<const std::string> attributes,
                                 const FitOptions& options) {
  data.validate();
  FairPipeline pipeline;
  pipeline.fitted_on = options.fitted_on;
  Dataset jittered = data;
  jittered.scores = ingest(data, options, pipeline.jitter);
  pipeline.steps.push_back(fit_global_joint(jittered, attributes, options));
  pipeline.order.assign(attributes.begin(), attributes.end());
  return pipeline;
}

}  // namespace seqfair
