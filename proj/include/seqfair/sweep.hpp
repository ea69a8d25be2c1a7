#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqfair/dataset.hpp"
#include "seqfair/metrics.hpp"
#include "seqfair/projection.hpp"

namespace seqfair {

// One evaluated point of a debiasing sweep.
struct SweepRow {
  // Attributes made fair, in application order; empty for the baseline.
  std::vector<std::string> path;
  // With deduplication: every ordered path collapsed into this row.
  std::vector<std::vector<std::string>> equivalent_paths;
  std::vector<double> epsilons;
  std::optional<double> risk_mse;
  UnfairnessBreakdown unfairness;
  double fit_seconds = 0.0;
  double transform_seconds = 0.0;
};

struct SweepOptions {
  FitOptions fit;
  GridSpec grid;
  // Collapse ordered prefixes with the same attribute set into one row.
  bool dedup = false;
};

inline constexpr std::size_t kMaxPathAttributes = 6;

// Every distinct ordered prefix of every permutation of `attributes`, each
// fitted at epsilon = 0 on `calibration` and evaluated on `evaluation`. Rows
// are ordered by prefix length, baseline first.
std::vector<SweepRow> sweep_paths(const Dataset& calibration, const Dataset& evaluation,
                                  std::span<const std::string> attributes,
                                  const SweepOptions& options = {});

// One full-order pipeline per epsilon vector.
std::vector<SweepRow> sweep_epsilon_grid(const Dataset& calibration, const Dataset& evaluation,
                                         std::span<const std::string> attributes,
                                         std::span<const std::vector<double>> epsilon_points,
                                         const SweepOptions& options = {});

// Cartesian power values^r, last attribute varying fastest.
std::vector<std::vector<double>> epsilon_lattice(std::span<const double> values, std::size_t r);

}  // namespace seqfair
