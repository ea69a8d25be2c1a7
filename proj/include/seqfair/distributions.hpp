#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "seqfair/grid.hpp"

namespace seqfair {

// One-dimensional empirical measure over a finite sample.
//
// cdf() is the right-continuous step function #{x_i <= u} / n and quantile()
// its generalized inverse inf{u : cdf(u) >= v}. Both are evaluated on the
// double-valued levels k / n so that quantile(cdf(x)) == x holds bit-exactly
// for every sample point when the sample has no ties.
//
// Immutable after construction.
class EmpiricalDistribution {
 public:
  // Throws EmptySample for an empty input and InvalidValue for NaN/inf.
  explicit EmpiricalDistribution(std::span<const double> samples);

  // Adopts values that are already sorted ascending. Used when restoring a
  // serialized quantile table; the same validation applies.
  static EmpiricalDistribution from_sorted(std::vector<double> sorted);

  double cdf(double u) const noexcept;

  // v must lie in [0, 1]; quantile(0) is the sample minimum.
  double quantile(double v) const;

  // Sorted sample, i.e. the quantile knots.
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }

  // Keeps at most `knots` points by equi-rank subsampling: knot j (1-based)
  // is quantile(j / knots). Returns a copy unchanged when size() <= knots.
  EmpiricalDistribution compressed(std::size_t knots) const;

  friend bool operator==(const EmpiricalDistribution&,
                         const EmpiricalDistribution&) = default;

 private:
  struct SortedTag {};
  EmpiricalDistribution(SortedTag, std::vector<double> sorted);

  // Smallest 1-based rank k with k / n >= v, for v in (0, 1].
  std::size_t rank_at_level(double v) const noexcept;

  std::vector<double> values_;
};

inline EmpiricalDistribution ecdf_fit(std::span<const double> samples) {
  return EmpiricalDistribution(samples);
}

// Half-width of the uniform ingestion noise plus its RNG seed. An amplitude of
// zero is the identity.
struct JitterSpec {
  double amplitude = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const JitterSpec&, const JitterSpec&) = default;
};

// Adds i.i.d. Uniform(-amplitude, +amplitude) noise to each score. Output is
// a deterministic function of (scores, spec).
std::vector<double> jitter_scores(std::span<const double> scores,
                                  const JitterSpec& spec);

// Default ingestion amplitude: scale times the sample standard deviation.
double auto_jitter_amplitude(std::span<const double> scores,
                             double scale = 1e-6);

// 2-Wasserstein distance via the quantile representation. Equal sample sizes
// use the exact sorted pairing; otherwise the integral over (0, 1) is taken on
// the midpoint grid.
double wasserstein2(const EmpiricalDistribution& a,
                    const EmpiricalDistribution& b,
                    const GridSpec& grid = {});

}  // namespace seqfair
