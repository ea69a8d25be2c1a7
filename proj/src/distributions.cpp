#include "seqfair/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace seqfair {

namespace {

void check_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidValue("sample value at index " + std::to_string(i) +
                         " is not finite");
    }
  }
}

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(std::span<const double> samples) {
  if (samples.empty()) throw EmptySample("cannot fit an empirical distribution to no samples");
  check_finite(samples);
  values_.assign(samples.begin(), samples.end());
  std::sort(values_.begin(), values_.end());
}

EmpiricalDistribution::EmpiricalDistribution(SortedTag, std::vector<double> sorted)
    : values_(std::move(sorted)) {}

EmpiricalDistribution EmpiricalDistribution::from_sorted(std::vector<double> sorted) {
  if (sorted.empty()) throw EmptySample("quantile table has no knots");
  check_finite(sorted);
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw InvalidValue("quantile knots are not sorted ascending");
  }
  return EmpiricalDistribution(SortedTag{}, std::move(sorted));
}

double EmpiricalDistribution::cdf(double u) const noexcept {
  const auto count = std::upper_bound(values_.begin(), values_.end(), u) - values_.begin();
  return static_cast<double>(count) / static_cast<double>(values_.size());
}

std::size_t EmpiricalDistribution::rank_at_level(double v) const noexcept {
  const std::size_t n = values_.size();
  const double dn = static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(v * dn));
  k = std::clamp<std::size_t>(k, 1, n);
  // v * n can be off by an ulp; settle on the comparison cdf() itself uses.
  while (k > 1 && static_cast<double>(k - 1) / dn >= v) --k;
  while (k < n && static_cast<double>(k) / dn < v) ++k;
  return k;
}

double EmpiricalDistribution::quantile(double v) const {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidProbability("quantile level " + std::to_string(v) + " is outside [0, 1]");
  }
  if (v == 0.0) return values_.front();
  return values_[rank_at_level(v) - 1];
}

EmpiricalDistribution EmpiricalDistribution::compressed(std::size_t knots) const {
  if (knots == 0) throw InvalidConfig("knot cap must be positive");
  if (values_.size() <= knots) return *this;
  std::vector<double> out;
  out.reserve(knots);
  const double dk = static_cast<double>(knots);
  for (std::size_t j = 1; j <= knots; ++j) {
    out.push_back(values_[rank_at_level(static_cast<double>(j) / dk) - 1]);
  }
  return EmpiricalDistribution(SortedTag{}, std::move(out));
}

std::vector<double> jitter_scores(std::span<const double> scores, const JitterSpec& spec) {
  std::vector<double> out(scores.begin(), scores.end());
  if (spec.amplitude == 0.0) return out;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> noise(-spec.amplitude, spec.amplitude);
  for (double& s : out) s += noise(rng);
  return out;
}

double auto_jitter_amplitude(std::span<const double> scores, double scale) {
  const std::size_t n = scores.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  return scale * std::sqrt(ss / static_cast<double>(n - 1));
}

double wasserstein2(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                    const GridSpec& grid) {
  const auto va = a.values();
  const auto vb = b.values();
  double sum = 0.0;
  if (va.size() == vb.size()) {
    for (std::size_t i = 0; i < va.size(); ++i) {
      const double d = va[i] - vb[i];
      sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(va.size()));
  }
  grid.validate();
  for (std::size_t t = 0; t < grid.nodes; ++t) {
    const double u = grid.node(t);
    const double d = a.quantile(u) - b.quantile(u);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(grid.nodes));
}

}  // namespace seqfair
