#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqfair/dataset.hpp"
#include "seqfair/distributions.hpp"

namespace seqfair {

inline constexpr std::size_t kDefaultMaxKnots = 100000;

// One fitted barycenter projection with respect to one sensitive attribute
// (or, for the joint variant, the tuple of several attributes).
//
// A score s in group g is sent to
//   (1 - epsilon) * sum_h weight_h * Q_h(F_g(s)) + epsilon * s,
// where F_g / Q_h are the ECDF / quantile of the step's input scores within
// each group. Groups are kept sorted by value so lookups and serialization are
// deterministic.
struct TransportStep {
  std::vector<std::string> attributes;
  std::vector<std::string> groups;
  std::vector<double> weights;
  std::vector<EmpiricalDistribution> dists;
  double epsilon = 0.0;

  bool is_joint() const noexcept { return attributes.size() > 1; }
  std::optional<std::size_t> group_index(std::string_view group) const;

  // Barycenter quantile sum_h weight_h * Q_h(level).
  double barycenter_quantile(double level) const;

  double apply(double score, std::size_t group) const;
  // Throws UnknownGroup when the group value was not seen at fit time.
  double apply(double score, std::string_view group) const;

  // Checks the weight / distribution / epsilon invariants.
  void validate() const;
};

struct FairPipeline {
  std::vector<TransportStep> steps;
  // Attribute names in application order; a joint step lists all of its
  // attributes consecutively.
  std::vector<std::string> order;
  JitterSpec jitter;
  std::string fitted_on;

  void validate() const;
};

struct FitOptions {
  // Absolute ingestion jitter half-width. nullopt picks 1e-6 times the
  // calibration score standard deviation.
  std::optional<double> jitter_amplitude;
  std::uint64_t seed = 0;
  std::size_t max_knots = kDefaultMaxKnots;
  // Joint cells below this count are rejected by fit_global_joint.
  std::size_t min_group_size = 2;
  // Optional declared levels per attribute; each one must be observed.
  std::map<std::string, std::vector<std::string>> levels;
  std::string fitted_on;
};

// Plug-in fit on one attribute. groups[i] is the group value of scores[i].
TransportStep fit_single_step(std::span<const double> scores,
                              std::span<const std::string> groups, double epsilon,
                              std::size_t max_knots = kDefaultMaxKnots);

double apply_single_step(const TransportStep& step, double score, std::string_view group);

// Jitters the calibration scores once, then fits one step per attribute in
// `order`, each on the scores produced by the steps before it.
FairPipeline fit_sequential(const Dataset& data, std::span<const std::string> order,
                            std::span<const double> epsilons, const FitOptions& options = {});

// Applies the steps in order to every row. Pure in the rows; does not jitter.
std::vector<double> apply_sequential(const FairPipeline& pipeline, const Dataset& data);

// One step over the composite group formed by all listed attributes,
// weighted by the joint cell frequencies.
TransportStep fit_global_joint(const Dataset& data, std::span<const std::string> attributes,
                               const FitOptions& options = {}, double epsilon = 0.0);

// fit_global_joint wrapped as a single-step pipeline (with the same ingestion
// jitter as fit_sequential).
FairPipeline fit_global_pipeline(const Dataset& data, std::span<const std::string> attributes,
                                 const FitOptions& options = {});

// Composite group key for a joint step: tokens joined by '\x1f'.
std::string joint_group_key(std::span<const std::string_view> tokens);

inline constexpr std::string_view kPipelineFormatVersion = "1";

// JSON document {format_version, order, steps, jitter, fitted_on}. Doubles
// round-trip bit-exactly.
std::string serialize_pipeline(const FairPipeline& pipeline);
// Throws ParseError (with location) on malformed input and VersionError on
// an unsupported format_version. Unknown fields are ignored.
FairPipeline deserialize_pipeline(std::string_view text);

}  // namespace seqfair
