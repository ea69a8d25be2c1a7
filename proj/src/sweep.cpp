#include "seqfair/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <set>

#include "seqfair/errors.hpp"

namespace seqfair {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SweepRow evaluate_path(const Dataset& calibration, const Dataset& evaluation,
                       std::span<const std::string> attributes, std::vector<std::string> path,
                       std::vector<double> epsilons, const SweepOptions& options) {
  SweepRow row;
  std::vector<double> scores = evaluation.scores;
  if (!path.empty()) {
    const auto fit_start = Clock::now();
    const FairPipeline pipeline = fit_sequential(calibration, path, epsilons, options.fit);
    row.fit_seconds = seconds_since(fit_start);
    const auto apply_start = Clock::now();
    scores = apply_sequential(pipeline, evaluation);
    row.transform_seconds = seconds_since(apply_start);
  }
  row.unfairness = unfairness_total(scores, evaluation, attributes, options.grid);
  if (evaluation.labels) row.risk_mse = risk_mse(scores, *evaluation.labels);
  row.path = std::move(path);
  row.epsilons = std::move(epsilons);
  return row;
}

}  // namespace

std::vector<SweepRow> sweep_paths(const Dataset& calibration, const Dataset& evaluation,
                                  std::span<const std::string> attributes,
                                  const SweepOptions& options) {
  if (attributes.empty()) throw InvalidConfig("sweep needs at least one attribute");
  if (attributes.size() > kMaxPathAttributes) {
    throw InvalidConfig("paths mode supports at most " + std::to_string(kMaxPathAttributes) +
                        " attributes (power-set enumeration); got " +
                        std::to_string(attributes.size()));
  }
  const std::set<std::string> distinct(attributes.begin(), attributes.end());
  if (distinct.size() != attributes.size()) throw InvalidConfig("sweep attributes must be distinct");

  // Ordered prefixes, deduplicated, grouped by length.
  const std::size_t r = attributes.size();
  std::vector<std::size_t> perm(r);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::set<std::vector<std::size_t>>> by_length(r + 1);
  by_length[0].insert(std::vector<std::size_t>{});
  do {
    for (std::size_t len = 1; len <= r; ++len) {
      by_length[len].insert(std::vector<std::size_t>(perm.begin(), perm.begin() + len));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  auto names = [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (std::size_t i : idx) out.push_back(attributes[i]);
    return out;
  };

  std::vector<SweepRow> rows;
  for (const auto& prefixes : by_length) {
    if (!options.dedup) {
      for (const auto& p : prefixes) {
        rows.push_back(evaluate_path(calibration, evaluation, attributes, names(p),
                                     std::vector<double>(p.size(), 0.0), options));
        rows.back().equivalent_paths = {rows.back().path};
      }
      continue;
    }
    std::map<std::vector<std::size_t>, std::vector<std::vector<std::size_t>>> by_set;
    for (const auto& p : prefixes) {
      auto key = p;
      std::sort(key.begin(), key.end());
      by_set[key].push_back(p);
    }
    for (const auto& [key, members] : by_set) {
      rows.push_back(evaluate_path(calibration, evaluation, attributes, names(members.front()),
                                   std::vector<double>(key.size(), 0.0), options));
      for (const auto& m : members) rows.back().equivalent_paths.push_back(names(m));
    }
  }
  return rows;
}

std::vector<SweepRow> sweep_epsilon_grid(const Dataset& calibration, const Dataset& evaluation,
                                         std::span<const std::string> attributes,
                                         std::span<const std::vector<double>> epsilon_points,
                                         const SweepOptions& options) {
  std::vector<SweepRow> rows;
  const std::vector<std::string> order(attributes.begin(), attributes.end());
  for (const auto& eps : epsilon_points) {
    rows.push_back(evaluate_path(calibration, evaluation, attributes, order, eps, options));
    rows.back().equivalent_paths = {order};
  }
  return rows;
}

std::vector<std::vector<double>> epsilon_lattice(std::span<const double> values, std::size_t r) {
  if (values.empty() || r == 0) throw InvalidConfig("epsilon lattice needs values and attributes");
  std::vector<std::vector<double>> points(1);
  for (std::size_t a = 0; a < r; ++a) {
    std::vector<std::vector<double>> next;
    for (const auto& p : points) {
      for (double v : values) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

}  // namespace seqfair
